#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atlas/catalog.hpp"

namespace atlas {

/// Input kinds accepted by ingest: the annotation kinds plus "text",
/// "attribution" and "dictionary".
std::vector<std::string> ingest_kinds();

struct IngestOptions {
  std::optional<CtsUrn> urn;  // version of a text TSV or CoNLL-U file
  std::optional<std::string> language;
  std::optional<std::string> label;
  std::vector<std::string> citation_scheme;
  std::string format;  // "xml" or "tsv" for texts; inferred from the path by the CLI
};

struct IngestResult {
  Catalog catalog;
  std::size_t records = 0;
  std::vector<std::string> warnings;
};

/// Parses `bytes` as `kind` and returns a new snapshot holding the result.
/// Nothing is returned unless the whole input parses.
IngestResult ingest(const Catalog& catalog, std::string_view kind, std::string_view bytes,
                    const IngestOptions& options);

/// Layout under `dir`:
///   CURRENT                         name of the live snapshot directory
///   snapshots/<id>/texts/*.tsv      rows, with *.json metadata beside each
///   snapshots/<id>/annotations/<kind>/records.json (audio: records.tsv)
///   snapshots/<id>/annotations/dictionary/entries.json
///   snapshots/<id>/attributions/attributions.json
/// A snapshot is written completely before CURRENT is replaced by rename.
void save_catalog(const Catalog& catalog, const std::filesystem::path& dir);

/// Empty catalog when `dir` holds no snapshot.
Catalog load_catalog(const std::filesystem::path& dir);

/// Contents of CURRENT, if any.
std::optional<std::string> current_snapshot(const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);

}  // namespace atlas
