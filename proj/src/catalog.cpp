#include "atlas/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <tuple>
#include <unordered_set>

#include "atlas/unicode.hpp"

namespace atlas {

namespace {

std::atomic<std::uint64_t> next_generation{1};

std::string family_key(const Annotation& annotation) {
  auto kind = annotation.kind == AnnotationKind::TextualNote ? AnnotationKind::Commentary : annotation.kind;
  return std::string(to_string(kind)) + "\n" + annotation.record_urn;
}

std::string attribution_key(const AttributionRecord& record) {
  std::vector<std::string> refs;
  for (const auto& r : record.references) refs.push_back(r.str());
  std::sort(refs.begin(), refs.end());
  std::string key = record.role + "\n" + record.person_name + "\n" + record.organization.value_or("") + "\n" +
                    (record.organization ? "1" : "0");
  for (const auto& r : refs) key += "\n" + r;
  return key;
}

void check_token(const TokenizedText& text, DocPosition position) {
  if (position.token == 0 || position.token == DocPosition::kRowEnd) return;
  const auto count = text.tokens(position.row).size();
  if (position.token > count) {
    throw Error(ErrorCode::TokenOutOfRange, "token " + std::to_string(position.token) + " of '" +
                                                text.rows()[position.row].ref.str() + "' but row has " +
                                                std::to_string(count) + " tokens");
  }
}

/// Interval of a URN within a loaded version. Throws when it names nothing.
std::optional<DocInterval> interval_of(const CtsUrn& urn, const TokenizedText& text) {
  if (!urn.passage) {
    if (text.size() == 0) return std::nullopt;
    return DocInterval{{0, 0}, {text.size() - 1, DocPosition::kRowEnd}};
  }
  auto interval = text.index().resolve(*urn.passage);
  check_token(text, interval.first);
  check_token(text, interval.last);
  return interval;
}

const VersionData& require_version(const CtsUrn& urn, const Catalog& catalog) {
  const auto* data = catalog.version(urn);
  if (!data) throw Error(ErrorCode::UnknownVersion, "version '" + version_key(urn) + "' is not loaded");
  return *data;
}

bool annotation_less(const std::shared_ptr<const Annotation>& a, const std::shared_ptr<const Annotation>& b) {
  return std::tie(a->kind, a->record_urn) < std::tie(b->kind, b->record_urn);
}

}  // namespace

std::string version_key(const CtsUrn& urn) { return urn.without_passage().str(); }

// --- OverlapIndex -------------------------------------------------------------

OverlapIndex::OverlapIndex(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.interval.first, a.annotation) < std::tie(b.interval.first, b.annotation);
  });
  if (entries_.empty()) return;
  std::size_t leaves = 1;
  while (leaves < entries_.size()) leaves *= 2;
  max_last_.resize(2 * leaves);
  build(1, 0, entries_.size());
}

DocPosition OverlapIndex::build(std::size_t node, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return max_last_[node] = entries_[lo].interval.last;
  std::size_t mid = lo + (hi - lo) / 2;
  auto left = build(2 * node, lo, mid);
  auto right = build(2 * node + 1, mid, hi);
  return max_last_[node] = std::max(left, right);
}

// --- Catalog -----------------------------------------------------------------

Catalog::Catalog() : generation_(next_generation++) {}

Catalog Catalog::register_version(VersionMetadata metadata, std::vector<TextRow> rows) const {
  if (versions_.count(version_key(metadata.urn))) {
    throw Error(ErrorCode::DuplicateVersion, "version '" + version_key(metadata.urn) + "' is already registered");
  }
  return upsert_version(std::move(metadata), std::move(rows));
}

Catalog Catalog::upsert_version(VersionMetadata metadata, std::vector<TextRow> rows) const {
  if (metadata.urn.passage || !metadata.urn.work || !metadata.urn.version) {
    throw Error(ErrorCode::InvariantViolation,
                "version URN '" + metadata.urn.str() + "' must name a version and no passage");
  }
  for (auto& row : rows) {
    if (!metadata.citation_scheme.empty() && row.ref.depth() != metadata.citation_scheme.size()) {
      throw Error(ErrorCode::InvariantViolation, "reference '" + row.ref.str() + "' does not match citation scheme of depth " +
                                                     std::to_string(metadata.citation_scheme.size()));
    }
    try {
      row.text = unicode::nfc(row.text);
    } catch (const Error& e) {
      throw Error(ErrorCode::InvariantViolation, "row '" + row.ref.str() + "': " + e.detail());
    }
  }
  auto data = std::make_shared<VersionData>();
  data->metadata = std::move(metadata);
  try {
    data->text = TokenizedText(std::move(rows));
  } catch (const Error& e) {
    throw Error(ErrorCode::InvariantViolation, std::string(code_name(e.code())) + ": " + e.detail(), e.locus());
  }
  Catalog next = *this;
  next.versions_[version_key(data->metadata.urn)] = std::move(data);
  next.rebuild();
  return next;
}

Catalog Catalog::with_annotations(std::vector<Annotation> annotations) const {
  Catalog next = *this;
  for (auto& a : annotations) {
    auto key = family_key(a);
    next.stored_[key] = std::make_shared<const Annotation>(std::move(a));
  }
  next.rebuild();
  return next;
}

Catalog Catalog::with_dictionary(std::vector<DictionaryEntry> entries) const {
  Catalog next = *this;
  for (auto& e : entries) {
    auto key = e.urn.str();
    next.entries_[key] = std::make_shared<const DictionaryEntry>(std::move(e));
  }
  next.rebuild();
  return next;
}

Catalog Catalog::with_attributions(std::vector<AttributionRecord> records) const {
  Catalog next = *this;
  for (auto& r : records) {
    auto key = attribution_key(r);
    next.attributions_[key] = std::make_shared<const AttributionRecord>(std::move(r));
  }
  next.generation_ = next_generation++;
  return next;
}

const VersionData* Catalog::version(const CtsUrn& urn) const {
  auto it = versions_.find(version_key(urn));
  return it == versions_.end() ? nullptr : it->second.get();
}

std::vector<const VersionData*> Catalog::versions() const {
  std::vector<const VersionData*> out;
  for (const auto& [key, data] : versions_) out.push_back(data.get());
  return out;
}

std::vector<const DictionaryEntry*> Catalog::dictionary_entries() const {
  std::vector<const DictionaryEntry*> out;
  for (const auto& [key, entry] : entries_) out.push_back(entry.get());
  return out;
}

std::vector<const AttributionRecord*> Catalog::attributions() const {
  std::vector<const AttributionRecord*> out;
  for (const auto& [key, record] : attributions_) out.push_back(record.get());
  return out;
}

const OverlapIndex* Catalog::overlap_index(const std::string& key) const {
  auto it = indices_.find(key);
  return it == indices_.end() ? nullptr : it->second.get();
}

void Catalog::rebuild() {
  generation_ = next_generation++;
  all_.clear();
  for (const auto& [key, a] : stored_) all_.push_back(a);
  for (const auto& [key, entry] : entries_) {
    for (auto& c : entry_citations(*entry)) all_.push_back(std::make_shared<const Annotation>(make_annotation(std::move(c))));
  }
  std::stable_sort(all_.begin(), all_.end(), annotation_less);

  dangling_.clear();
  std::map<std::string, std::vector<OverlapIndex::Entry>> entries;
  for (const auto& [key, data] : versions_) entries[key];
  for (std::size_t i = 0; i < all_.size(); ++i) {
    for (const auto& target : all_[i]->targets) {
      auto key = version_key(target);
      auto it = versions_.find(key);
      if (it == versions_.end()) continue;
      try {
        if (auto interval = interval_of(target, it->second->text)) entries[key].push_back({*interval, i});
      } catch (const Error& e) {
        dangling_.push_back({"DanglingTarget", target.str() + ": " + e.detail(), all_[i]->record_urn});
      }
    }
  }
  indices_.clear();
  for (auto& [key, list] : entries) indices_[key] = std::make_shared<const OverlapIndex>(std::move(list));
}

// --- queries -----------------------------------------------------------------

std::vector<ResolvedRow> resolve_passage(const CtsUrn& urn, const Catalog& catalog) {
  const auto& text = require_version(urn, catalog).text;
  auto interval = interval_of(urn, text);
  std::vector<ResolvedRow> out;
  if (!interval) return out;
  for (std::size_t row = interval->first.row; row <= interval->last.row; ++row) {
    const auto& tokens = text.tokens(row);
    std::size_t begin = 0;
    std::size_t end = tokens.size();
    if (row == interval->first.row && interval->first.token != 0) begin = interval->first.token - 1;
    if (row == interval->last.row && interval->last.token != DocPosition::kRowEnd) end = interval->last.token;
    out.push_back({&text.rows()[row], std::span<const Token>(tokens).subspan(begin, end - begin)});
  }
  return out;
}

std::vector<std::shared_ptr<const Annotation>> annotations_overlapping(const CtsUrn& urn,
                                                                       std::optional<AnnotationKind> kind,
                                                                       const Catalog& catalog) {
  const auto& text = require_version(urn, catalog).text;
  auto interval = interval_of(urn, text);
  std::vector<std::shared_ptr<const Annotation>> out;
  const auto* index = catalog.overlap_index(version_key(urn));
  if (!interval || !index) return out;
  std::vector<std::size_t> hits;
  index->visit(*interval, [&](std::size_t i) { hits.push_back(i); });
  std::sort(hits.begin(), hits.end());
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
  const auto& all = catalog.annotations();
  for (auto i : hits) {
    if (!kind || all[i]->kind == *kind) out.push_back(all[i]);
  }
  return out;
}

std::vector<VeRef> unaligned_tokens(const CtsUrn& urn, const Catalog& catalog) {
  auto rows = resolve_passage(urn, catalog);
  std::vector<VeRef> out;
  for (const auto& r : rows) {
    auto row_urn = urn.without_passage().with_passage(PassageRef::point(r.row->ref));
    auto records = annotations_overlapping(row_urn, AnnotationKind::Alignment, catalog);
    if (records.empty()) continue;
    std::set<std::uint32_t> aligned;
    for (const auto& a : records) {
      for (const auto& t : a->targets) {
        if (same_work_hierarchy(t.without_passage(), urn.without_passage()) && t.passage &&
            t.passage->start == r.row->ref && t.passage->start_token) {
          aligned.insert(*t.passage->start_token);
        }
      }
    }
    for (const auto& token : r.tokens) {
      if (!aligned.count(token.ve_ref.token)) out.push_back(token.ve_ref);
    }
  }
  return out;
}

std::vector<AttributionReportRow> aggregate_attributions(const Catalog& catalog) {
  using Key = std::tuple<std::string, std::string, std::optional<std::string>>;
  std::map<Key, std::set<std::string>> groups;
  std::map<Key, std::string> contributors;
  for (const auto* record : catalog.attributions()) {
    Key key{record->role, record->person_name, record->organization};
    auto& refs = groups[key];
    for (const auto& r : record->references) refs.insert(r.str());
    contributors[key] = record->contributor();
  }
  std::vector<AttributionReportRow> out;
  for (const auto& [key, refs] : groups) out.push_back({std::get<0>(key), contributors[key], refs.size()});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.role, a.contributor) < std::tie(b.role, b.contributor);
  });
  return out;
}

std::vector<Diagnostic> link_check(const Catalog& catalog) {
  std::vector<Diagnostic> out = catalog.dangling();
  std::unordered_set<std::string> records;
  for (const auto& a : catalog.annotations()) {
    records.insert(a->record_urn);
    if (const auto* tree = std::get_if<SyntaxTree>(&a->payload)) {
      for (const auto& issue : validate_tree(*tree, ValidationMode::Lenient).issues) {
        out.push_back({std::string(code_name(issue.code)), std::to_string(issue.word_id) + ": " + issue.detail, a->record_urn});
      }
    } else if (const auto* spans = std::get_if<SubTokenSpanAnnotation>(&a->payload)) {
      auto target = spans->target();
      const auto* data = target ? catalog.version(*target) : nullptr;
      if (!data) continue;
      auto pos = data->text.index().position(spans->ref);
      if (!pos) continue;
      auto length = unicode::length(data->text.rows()[*pos].text);
      for (const auto& s : spans->spans) {
        if (s.end > length) {
          out.push_back({"SpanOutOfRange",
                         "[" + std::to_string(s.start) + "," + std::to_string(s.end) + ") exceeds " +
                             std::to_string(length) + " characters of " + spans->ref.str(),
                         a->record_urn});
        }
      }
    }
  }
  for (const auto* entry : catalog.dictionary_entries()) {
    records.insert(entry->urn.str());
    for (const auto* sense : flatten_senses(*entry)) records.insert(sense->urn.str());
  }
  for (const auto* record : catalog.attributions()) {
    for (const auto& r : record->references) {
      if (!records.count(r.str())) out.push_back({"UnmatchedCredit", r.str(), record->contributor()});
    }
  }
  return out;
}

std::string format_count(std::uint64_t count) {
  auto digits = std::to_string(count);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

// --- SnapshotStore -----------------------------------------------------------

SnapshotStore::SnapshotStore(Catalog initial) : current_(std::make_shared<const Catalog>(std::move(initial))) {}

std::shared_ptr<const Catalog> SnapshotStore::current() const {
  std::lock_guard lock(mutex_);
  return current_;
}

void SnapshotStore::publish(Catalog next) {
  auto snapshot = std::make_shared<const Catalog>(std::move(next));
  std::lock_guard lock(mutex_);
  current_ = std::move(snapshot);
}

}  // namespace atlas
