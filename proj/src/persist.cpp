#include "atlas/persist.hpp"

#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include "atlas/tei.hpp"

namespace atlas {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kCurrent = "CURRENT";

void write_file(const fs::path& path, std::string_view bytes) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
}

/// "urn:cts:greekLit:tlg0012.tlg001.perseus-grc2" -> "greekLit.tlg0012.tlg001.perseus-grc2"
std::string file_stem(const CtsUrn& urn) {
  auto text = urn.str().substr(std::string_view("urn:cts:").size());
  for (auto& c : text) {
    if (c == ':') c = '.';
  }
  return text;
}

json metadata_json(const VersionMetadata& m) {
  return {{"urn", m.urn.str()}, {"language", m.language}, {"label", m.label}, {"citation_scheme", m.citation_scheme}};
}

VersionMetadata metadata_from_json(const json& j) {
  VersionMetadata m;
  m.urn = parse_cts_urn(j.at("urn").get<std::string>());
  m.language = j.at("language").get<std::string>();
  m.label = j.at("label").get<std::string>();
  m.citation_scheme = j.at("citation_scheme").get<std::vector<std::string>>();
  return m;
}

std::vector<Annotation> conllu_annotations(std::string_view bytes, const IngestOptions& options) {
  if (!options.urn || options.urn->passage || !options.urn->version) {
    throw Error(ErrorCode::SchemaError, "CoNLL-U ingestion needs --urn naming the analysed version");
  }
  std::vector<Annotation> out;
  for (auto& s : parse_conllu(bytes)) out.push_back(make_annotation(ConlluSentence{*options.urn, std::move(s)}));
  return out;
}

template <typename T>
std::vector<Annotation> wrap(std::vector<T> items) {
  std::vector<Annotation> out;
  out.reserve(items.size());
  for (auto& item : items) out.push_back(make_annotation(std::move(item)));
  return out;
}

std::vector<Annotation> parse_kind(AnnotationKind kind, std::string_view bytes, const IngestOptions& options) {
  switch (kind) {
    case AnnotationKind::Commentary:
    case AnnotationKind::TextualNote: return wrap(parse_commentary(bytes));
    case AnnotationKind::Alignment: return wrap(parse_alignments(bytes));
    case AnnotationKind::SyntaxTree: return wrap(parse_treebank_json(bytes));
    case AnnotationKind::Conllu: return conllu_annotations(bytes, options);
    case AnnotationKind::Audio: return wrap(parse_audio_tsv(bytes));
    case AnnotationKind::Metrical: return wrap(parse_subtoken_spans(bytes));
    case AnnotationKind::Grammar: return wrap(parse_grammar_links(bytes));
    case AnnotationKind::DictionaryCitation: break;
  }
  throw Error(ErrorCode::SchemaError, "unsupported kind");
}

IngestResult ingest_text(const Catalog& catalog, std::string_view bytes, const IngestOptions& options) {
  IngestResult result;
  VersionMetadata metadata;
  std::vector<TextRow> rows;
  if (options.format == "xml") {
    auto flat = flatten_tei_subset(parse_tei_xml(bytes));
    metadata = std::move(flat.metadata);
    rows = std::move(flat.rows);
    result.warnings = std::move(flat.warnings);
    if (options.urn) metadata.urn = *options.urn;
  } else {
    if (!options.urn) throw Error(ErrorCode::SchemaError, "text TSV ingestion needs --urn naming the version");
    rows = read_text_tsv(bytes);
    metadata.urn = *options.urn;
    metadata.label = metadata.urn.version.value_or("");
  }
  if (options.language) metadata.language = *options.language;
  if (options.label) metadata.label = *options.label;
  if (!options.citation_scheme.empty()) metadata.citation_scheme = options.citation_scheme;
  result.records = rows.size();
  result.catalog = catalog.upsert_version(std::move(metadata), std::move(rows));
  return result;
}

json annotations_array(const Catalog& catalog, AnnotationKind kind) {
  json out = json::array();
  for (const auto& a : catalog.annotations()) {
    if (a->kind == kind) out.push_back(payload_json(*a));
  }
  return out;
}

}  // namespace

std::vector<std::string> ingest_kinds() {
  std::vector<std::string> out{"text", "attribution", "dictionary"};
  for (auto kind : kAllAnnotationKinds) out.emplace_back(to_string(kind));
  return out;
}

IngestResult ingest(const Catalog& catalog, std::string_view kind, std::string_view bytes,
                    const IngestOptions& options) {
  if (kind == "text") return ingest_text(catalog, bytes, options);
  IngestResult result;
  if (kind == "attribution") {
    auto records = parse_attributions(bytes);
    result.records = records.size();
    result.catalog = catalog.with_attributions(std::move(records));
    return result;
  }
  if (kind == "dictionary" || kind == "dictionary-citation") {
    auto entries = parse_dictionary(bytes);
    result.records = entries.size();
    result.catalog = catalog.with_dictionary(std::move(entries));
    return result;
  }
  auto parsed = parse_annotation_kind(kind);
  if (!parsed) throw Error(ErrorCode::SchemaError, "unknown kind '" + std::string(kind) + "'");
  auto annotations = parse_kind(*parsed, bytes, options);
  result.records = annotations.size();
  result.catalog = catalog.with_annotations(std::move(annotations));
  return result;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::optional<std::string> current_snapshot(const fs::path& dir) {
  std::error_code ec;
  if (!fs::exists(dir / kCurrent, ec)) return std::nullopt;
  auto text = read_file(dir / kCurrent);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

void save_catalog(const Catalog& catalog, const fs::path& dir) {
  auto previous = current_snapshot(dir);
  std::random_device rd;
  auto stamp = std::chrono::system_clock::now().time_since_epoch().count();
  std::string id = std::to_string(stamp) + "-" + std::to_string(rd() % 1000000);
  auto root = dir / "snapshots" / id;

  for (const auto* v : catalog.versions()) {
    auto stem = file_stem(v->metadata.urn);
    write_file(root / "texts" / (stem + ".tsv"), write_text_tsv(v->text.rows()));
    write_file(root / "texts" / (stem + ".json"), metadata_json(v->metadata).dump(2) + "\n");
  }
  for (auto kind : kAllAnnotationKinds) {
    if (kind == AnnotationKind::DictionaryCitation) continue;
    auto folder = root / "annotations" / std::string(to_string(kind));
    if (kind == AnnotationKind::Audio) {
      std::vector<AudioAnnotation> audio;
      for (const auto& a : catalog.annotations()) {
        if (const auto* p = std::get_if<AudioAnnotation>(&a->payload)) audio.push_back(*p);
      }
      if (!audio.empty()) write_file(folder / "records.tsv", write_audio_tsv(audio));
      continue;
    }
    auto records = annotations_array(catalog, kind);
    if (!records.empty()) write_file(folder / "records.json", records.dump(2) + "\n");
  }
  json entries = json::array();
  for (const auto* e : catalog.dictionary_entries()) entries.push_back(to_json(*e));
  if (!entries.empty()) write_file(root / "annotations" / "dictionary" / "entries.json", entries.dump(2) + "\n");
  json credits = json::array();
  for (const auto* r : catalog.attributions()) credits.push_back(to_json(*r));
  if (!credits.empty()) write_file(root / "attributions" / "attributions.json", credits.dump(2) + "\n");
  fs::create_directories(root);

  auto temp = dir / (std::string(kCurrent) + ".tmp");
  write_file(temp, id + "\n");
  fs::rename(temp, dir / kCurrent);

  // Keep the previous snapshot so a reader that already resolved it can finish loading.
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir / "snapshots", ec)) {
    auto name = entry.path().filename().string();
    if (name != id && (!previous || name != *previous)) fs::remove_all(entry.path(), ec);
  }
}

Catalog load_catalog(const fs::path& dir) {
  Catalog catalog;
  auto id = current_snapshot(dir);
  if (!id) return catalog;
  auto root = dir / "snapshots" / *id;
  if (!fs::is_directory(root)) throw Error(ErrorCode::IoError, "snapshot '" + root.string() + "' is missing");

  std::vector<fs::path> texts;
  if (fs::is_directory(root / "texts")) {
    for (const auto& entry : fs::directory_iterator(root / "texts")) {
      if (entry.path().extension() == ".tsv") texts.push_back(entry.path());
    }
  }
  std::sort(texts.begin(), texts.end());
  for (const auto& tsv : texts) {
    auto meta_path = tsv;
    meta_path.replace_extension(".json");
    auto metadata = metadata_from_json(json::parse(read_file(meta_path)));
    catalog = catalog.register_version(std::move(metadata), read_text_tsv(read_file(tsv)));
  }

  std::vector<Annotation> annotations;
  for (auto kind : kAllAnnotationKinds) {
    auto folder = root / "annotations" / std::string(to_string(kind));
    if (kind == AnnotationKind::Audio) {
      if (fs::exists(folder / "records.tsv")) {
        for (auto& a : wrap(parse_audio_tsv(read_file(folder / "records.tsv")))) annotations.push_back(std::move(a));
      }
      continue;
    }
    if (!fs::exists(folder / "records.json")) continue;
    auto bytes = read_file(folder / "records.json");
    if (kind == AnnotationKind::Conllu) {
      for (const auto& item : json::parse(bytes)) {
        auto version = parse_cts_urn(item.at("version").get<std::string>());
        annotations.push_back(make_annotation(ConlluSentence{version, sentence_from_json(item)}));
      }
      continue;
    }
    for (auto& a : parse_kind(kind, bytes, {})) annotations.push_back(std::move(a));
  }
  catalog = catalog.with_annotations(std::move(annotations));
  if (fs::exists(root / "annotations" / "dictionary" / "entries.json")) {
    catalog = catalog.with_dictionary(parse_dictionary(read_file(root / "annotations" / "dictionary" / "entries.json")));
  }
  if (fs::exists(root / "attributions" / "attributions.json")) {
    catalog = catalog.with_attributions(parse_attributions(read_file(root / "attributions" / "attributions.json")));
  }
  return catalog;
}

}  // namespace atlas
