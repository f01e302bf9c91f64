#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "atlas/annotations.hpp"
#include "atlas/text.hpp"
#include "atlas/urn.hpp"

namespace atlas {

struct VersionData {
  VersionMetadata metadata;
  TokenizedText text;
};

struct ResolvedRow {
  const TextRow* row;
  std::span<const Token> tokens;
};

struct AttributionReportRow {
  std::string role;
  std::string contributor;
  std::uint64_t count = 0;

  friend bool operator==(const AttributionReportRow&, const AttributionReportRow&) = default;
};

struct Diagnostic {
  std::string code;     // DanglingHead, CyclicHeads, DanglingTarget, SpanOutOfRange, UnmatchedCredit
  std::string detail;
  std::string subject;  // record the diagnostic is about

  std::string str() const { return code + " " + detail + " [" + subject + "]"; }
};

class OverlapIndex;

/// Immutable snapshot of ingested versions, annotations and attributions.
/// Every update returns a new snapshot; earlier snapshots stay valid and unchanged.
class Catalog {
 public:
  Catalog();

  /// Throws DuplicateVersion when the version is already present, InvariantViolation
  /// when the rows or metadata are inconsistent. Row text is NFC-normalized.
  Catalog register_version(VersionMetadata metadata, std::vector<TextRow> rows) const;
  /// Same as register_version but replaces an existing version of the same URN.
  Catalog upsert_version(VersionMetadata metadata, std::vector<TextRow> rows) const;

  /// Adds annotations, replacing any earlier record with the same kind and URN.
  Catalog with_annotations(std::vector<Annotation> annotations) const;
  /// Adds dictionary entries (replacing by entry URN); their citations become annotations.
  Catalog with_dictionary(std::vector<DictionaryEntry> entries) const;
  /// Adds attribution records, replacing identical (role, person, organization, references) records.
  Catalog with_attributions(std::vector<AttributionRecord> records) const;

  const VersionData* version(const CtsUrn& urn) const;
  /// Versions ordered by URN.
  std::vector<const VersionData*> versions() const;
  /// Every annotation in deterministic (kind, record URN) order.
  const std::vector<std::shared_ptr<const Annotation>>& annotations() const noexcept { return all_; }
  std::vector<const DictionaryEntry*> dictionary_entries() const;
  std::vector<const AttributionRecord*> attributions() const;

  /// Annotation targets that name a loaded version but resolve to nothing.
  const std::vector<Diagnostic>& dangling() const noexcept { return dangling_; }

  /// Distinct per snapshot; usable as an ETag.
  std::uint64_t generation() const noexcept { return generation_; }

  const OverlapIndex* overlap_index(const std::string& version_key) const;

 private:
  void rebuild();

  std::map<std::string, std::shared_ptr<const VersionData>> versions_;
  std::map<std::string, std::shared_ptr<const Annotation>> stored_;  // keyed by family + record URN
  std::map<std::string, std::shared_ptr<const DictionaryEntry>> entries_;
  std::map<std::string, std::shared_ptr<const AttributionRecord>> attributions_;

  std::vector<std::shared_ptr<const Annotation>> all_;
  std::map<std::string, std::shared_ptr<const OverlapIndex>> indices_;
  std::vector<Diagnostic> dangling_;
  std::uint64_t generation_ = 0;
};

/// Intervals of annotation targets over one version's document positions.
class OverlapIndex {
 public:
  struct Entry {
    DocInterval interval;
    std::size_t annotation;  // position in Catalog::annotations()
  };

  explicit OverlapIndex(std::vector<Entry> entries);

  /// Calls `fn(annotation)` for each entry intersecting `query` (possibly repeated).
  template <typename Fn>
  void visit(const DocInterval& query, Fn&& fn) const {
    if (entries_.empty()) return;
    visit_node(1, 0, entries_.size(), query, fn);
  }

  std::size_t size() const noexcept { return entries_.size(); }

 private:
  template <typename Fn>
  void visit_node(std::size_t node, std::size_t lo, std::size_t hi, const DocInterval& q, Fn& fn) const {
    if (max_last_[node] < q.first || q.last < entries_[lo].interval.first) return;
    if (hi - lo == 1) {
      fn(entries_[lo].annotation);
      return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    visit_node(2 * node, lo, mid, q, fn);
    visit_node(2 * node + 1, mid, hi, q, fn);
  }

  DocPosition build(std::size_t node, std::size_t lo, std::size_t hi);

  std::vector<Entry> entries_;        // sorted by interval start
  std::vector<DocPosition> max_last_;  // segment tree over entries_
};

/// Key identifying a version: its URN without passage.
std::string version_key(const CtsUrn& urn);

/// Rows (and tokens) named by a URN. A URN without passage yields every row.
/// Throws UnknownVersion, UnknownReference, InvertedRange or TokenOutOfRange.
std::vector<ResolvedRow> resolve_passage(const CtsUrn& urn, const Catalog& catalog);

/// Annotations whose targets intersect the passage, ordered by (kind, record URN).
/// Throws UnknownVersion for an unloaded version.
std::vector<std::shared_ptr<const Annotation>> annotations_overlapping(const CtsUrn& urn,
                                                                       std::optional<AnnotationKind> kind,
                                                                       const Catalog& catalog);

/// Tokens of the passage's rows that no alignment group names, for rows that at
/// least one alignment record touches.
std::vector<VeRef> unaligned_tokens(const CtsUrn& urn, const Catalog& catalog);

/// Distinct credited references per (role, person, organization), sorted by role
/// then contributor.
std::vector<AttributionReportRow> aggregate_attributions(const Catalog& catalog);

/// Dangling targets, tree validation issues, out-of-range spans and credits that
/// match no loaded record.
std::vector<Diagnostic> link_check(const Catalog& catalog);

/// 2081 -> "2,081"
std::string format_count(std::uint64_t count);

/// Holds the current snapshot. Readers take a shared pointer; writers are serialized
/// and swap a complete new snapshot in.
class SnapshotStore {
 public:
  explicit SnapshotStore(Catalog initial = Catalog());

  std::shared_ptr<const Catalog> current() const;
  void publish(Catalog next);

  template <typename Fn>
  void update(Fn&& fn) {
    std::lock_guard writer(writer_mutex_);
    publish(fn(*current()));
  }

 private:
  mutable std::mutex mutex_;
  std::mutex writer_mutex_;
  std::shared_ptr<const Catalog> current_;
};

}  // namespace atlas
