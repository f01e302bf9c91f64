#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "atlas/api.hpp"
#include "atlas/catalog.hpp"

namespace httplib {
class Server;
}

namespace atlas {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 7000;  // 0 picks a free port
  std::string cors_origin = "*";
  std::size_t max_parts = api::kDefaultMaxParts;
  std::optional<std::filesystem::path> data_dir;  // polled for new snapshots when set
  std::chrono::milliseconds poll_interval{500};
};

/// HTTP front end over a SnapshotStore. Each request reads one snapshot.
class ApiServer {
 public:
  ApiServer(std::shared_ptr<SnapshotStore> store, ServerOptions options);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds and serves on a background thread. Returns the bound port.
  int start();
  /// Binds and serves on the calling thread until stop().
  void run();
  void stop();

  int port() const noexcept { return port_; }

 private:
  void routes();
  int bind();
  void poll_data_dir();

  std::shared_ptr<SnapshotStore> store_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> http_;
  std::thread serve_thread_;
  std::thread poll_thread_;
  std::mutex poll_mutex_;
  std::condition_variable poll_cv_;
  bool stopping_ = false;
  std::optional<std::string> loaded_snapshot_;
  int port_ = 0;
};

}  // namespace atlas
