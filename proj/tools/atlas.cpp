// atlas: ingest, resolve, report, validate and serve a data directory.
// Exit codes: 0 ok, 1 input error, 2 validation failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "atlas/persist.hpp"
#include "atlas/server.hpp"

namespace {

namespace fs = std::filesystem;

std::string describe(const atlas::Error& e) {
  std::string out(atlas::code_name(e.code()));
  if (e.locus()) {
    out += e.locus()->unit == atlas::Locus::Unit::Line ? " at line " : " at record ";
    out += std::to_string(e.locus()->number);
  }
  return out + ": " + e.detail();
}

std::vector<std::string> split_scheme(const std::string& text) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin <= text.size() && !text.empty()) {
    auto comma = text.find(',', begin);
    out.push_back(text.substr(begin, comma == std::string::npos ? std::string::npos : comma - begin));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ATLAS text and annotation catalog"};
  app.require_subcommand(1);

  std::string data_dir = "atlas-data";
  if (const char* env = std::getenv("ATLAS_DATA_DIR")) data_dir = env;
  app.add_option("--data-dir", data_dir, "Persistence root (env ATLAS_DATA_DIR)");

  auto* ingest = app.add_subcommand("ingest", "Parse a file and add it to the catalog");
  std::string kind, path, urn, lang, label, scheme;
  ingest->add_option("--kind", kind, "Input kind")->required()->check(CLI::IsMember(atlas::ingest_kinds()));
  ingest->add_option("--path", path, "Input file")->required();
  ingest->add_option("--urn", urn, "Version URN (text TSV, CoNLL-U)");
  ingest->add_option("--lang", lang, "Language code");
  ingest->add_option("--label", label, "Display label");
  ingest->add_option("--scheme", scheme, "Citation scheme, comma-separated");
  ingest->add_option("--data-dir", data_dir, "Persistence root");

  auto* resolve = app.add_subcommand("resolve", "Print the rows a URN names as TSV");
  std::string resolve_urn;
  resolve->add_option("urn", resolve_urn, "CTS URN")->required();
  resolve->add_option("--data-dir", data_dir, "Persistence root");

  auto* report = app.add_subcommand("report", "Print a report");
  std::string report_name;
  report->add_option("name", report_name, "Report name")->required()->check(CLI::IsMember({"attributions"}));
  report->add_option("--data-dir", data_dir, "Persistence root");

  auto* validate = app.add_subcommand("validate", "Check links between loaded records");
  bool strict = false;
  validate->add_flag("--strict", strict, "Exit 2 when diagnostics exist");
  validate->add_option("--data-dir", data_dir, "Persistence root");

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  atlas::ServerOptions server_options;
  serve->add_option("--port", server_options.port, "Port");
  serve->add_option("--host", server_options.host, "Listen address");
  serve->add_option("--cors-origin", server_options.cors_origin, "Allowed CORS origin");
  serve->add_option("--max-parts", server_options.max_parts, "Rows per passage response");
  serve->add_option("--data-dir", data_dir, "Persistence root");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (*ingest) {
      atlas::IngestOptions options;
      if (!urn.empty()) options.urn = atlas::parse_cts_urn(urn);
      if (!lang.empty()) options.language = lang;
      if (!label.empty()) options.label = label;
      options.citation_scheme = split_scheme(scheme);
      options.format = fs::path(path).extension() == ".xml" ? "xml" : "tsv";
      auto catalog = atlas::load_catalog(data_dir);
      auto result = atlas::ingest(catalog, kind, atlas::read_file(path), options);
      atlas::save_catalog(result.catalog, data_dir);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "ingested " << result.records << " records\n";
      return 0;
    }
    if (*resolve) {
      auto target = atlas::parse_cts_urn(resolve_urn);
      auto catalog = atlas::load_catalog(data_dir);
      std::vector<atlas::TextRow> rows;
      for (const auto& r : atlas::resolve_passage(target, catalog)) rows.push_back(*r.row);
      std::cout << atlas::write_text_tsv(rows);
      return 0;
    }
    if (*report) {
      auto catalog = atlas::load_catalog(data_dir);
      for (const auto& row : atlas::aggregate_attributions(catalog)) {
        std::cout << row.role << '\t' << row.contributor << '\t' << atlas::format_count(row.count) << '\n';
      }
      return 0;
    }
    if (*validate) {
      auto diagnostics = atlas::link_check(atlas::load_catalog(data_dir));
      for (const auto& d : diagnostics) std::cout << d.str() << "\n";
      return strict && !diagnostics.empty() ? 2 : 0;
    }
    if (*serve) {
      server_options.data_dir = fs::path(data_dir);
      auto store = std::make_shared<atlas::SnapshotStore>(atlas::load_catalog(data_dir));
      atlas::ApiServer server(store, server_options);
      std::cerr << "serving on " << server_options.host << ":" << server_options.port << "\n";
      server.run();
      return 0;
    }
  } catch (const atlas::Error& e) {
    std::cerr << describe(e) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
