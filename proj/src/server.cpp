#include "atlas/server.hpp"

#include <iostream>

#include "httplib.h"

#include "atlas/persist.hpp"

namespace atlas {

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, const Error& e) {
  send_json(res, api::http_status(e.code()), api::error_body(code_name(e.code()), e.detail()));
}

}  // namespace

ApiServer::ApiServer(std::shared_ptr<SnapshotStore> store, ServerOptions options)
    : store_(std::move(store)), options_(std::move(options)), http_(std::make_unique<httplib::Server>()) {
  if (options_.data_dir) loaded_snapshot_ = current_snapshot(*options_.data_dir);
  routes();
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::routes() {
  auto& http = *http_;
  http.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", options_.cors_origin);
    if (req.method == "OPTIONS") {
      res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type, If-None-Match");
      res.status = 204;
      return httplib::Server::HandlerResponse::Handled;
    }
    return httplib::Server::HandlerResponse::Unhandled;
  });

  // Reads one snapshot, answers 304 when the client already holds it.
  auto handle = [this](auto&& body) {
    return [this, body](const httplib::Request& req, httplib::Response& res) {
      auto snapshot = store_->current();
      auto etag = "\"" + std::to_string(snapshot->generation()) + "\"";
      res.set_header("ETag", etag);
      if (req.get_header_value("If-None-Match") == etag) {
        res.status = 304;
        return;
      }
      try {
        send_json(res, 200, body(*snapshot, req));
      } catch (const Error& e) {
        send_error(res, e);
      }
    };
  };

  http.Get("/api/library", handle([](const Catalog& c, const httplib::Request&) { return api::library(c); }));

  http.Get(R"(/api/passages/(.+))", handle([this](const Catalog& c, const httplib::Request& req) {
             return api::passage(c, parse_cts_urn(req.matches[1].str()), options_.max_parts);
           }));

  http.Get("/api/annotations", handle([](const Catalog& c, const httplib::Request& req) {
             if (!req.has_param("urn")) throw Error(ErrorCode::MalformedUrn, "missing urn parameter");
             auto urn = parse_cts_urn(req.get_param_value("urn"));
             std::optional<AnnotationKind> kind;
             if (req.has_param("kind")) {
               kind = parse_annotation_kind(req.get_param_value("kind"));
               if (!kind) throw Error(ErrorCode::SchemaError, "unknown kind '" + req.get_param_value("kind") + "'");
             }
             return api::annotations(c, urn, kind);
           }));

  http.Get("/api/attributions/report",
           handle([](const Catalog& c, const httplib::Request&) { return api::attribution_report(c); }));

  http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      send_json(res, res.status, api::error_body(res.status == 404 ? "NotFound" : "HttpError", res.reason.empty() ? httplib::status_message(res.status) : res.reason));
    }
  });
}

int ApiServer::bind() {
  if (options_.port == 0) {
    port_ = http_->bind_to_any_port(options_.host);
  } else {
    port_ = http_->bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  if (port_ < 0) {
    throw Error(ErrorCode::IoError, "cannot bind " + options_.host + ":" + std::to_string(options_.port));
  }
  if (options_.data_dir) poll_thread_ = std::thread([this] { poll_data_dir(); });
  return port_;
}

int ApiServer::start() {
  bind();
  serve_thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return port_;
}

void ApiServer::run() {
  bind();
  http_->listen_after_bind();
}

void ApiServer::stop() {
  {
    std::lock_guard lock(poll_mutex_);
    stopping_ = true;
  }
  poll_cv_.notify_all();
  http_->stop();
  if (serve_thread_.joinable()) serve_thread_.join();
  if (poll_thread_.joinable()) poll_thread_.join();
}

void ApiServer::poll_data_dir() {
  std::unique_lock lock(poll_mutex_);
  while (!poll_cv_.wait_for(lock, options_.poll_interval, [this] { return stopping_; })) {
    try {
      auto id = current_snapshot(*options_.data_dir);
      if (id && id != loaded_snapshot_) {
        store_->publish(load_catalog(*options_.data_dir));
        loaded_snapshot_ = id;
      }
    } catch (const std::exception& e) {
      std::cerr << "reload failed: " << e.what() << "\n";
    }
  }
}

}  // namespace atlas
