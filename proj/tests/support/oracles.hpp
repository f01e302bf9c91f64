#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "atlas/catalog.hpp"

namespace atlas::testing {

/// Absolute path of a file under tests/fixtures.
std::string fixture_path(const std::string& name);
std::string fixture(const std::string& name);

inline const char* kIliadGrc = "urn:cts:greekLit:tlg0012.tlg001.perseus-grc2";
inline const char* kIliadEng = "urn:cts:greekLit:tlg0012.tlg001.parrish-eng1";
inline const char* kMarlowe = "urn:cts:engLit:mds822-32.tpsth1-1599.pdl-eng";
inline const char* kThucydides = "urn:cts:greekLit:tlg0003.tlg001.perseus-grc2";

/// Every fixture loaded through the ingest entry point.
Catalog fixture_catalog();

// --- brute-force oracles ------------------------------------------------------
// These scan row lists directly and share no code with ReferenceIndex,
// OverlapIndex or the aggregation in the library.

struct Cell {
  std::size_t row;
  std::uint64_t token;  // 0 = row start, kEnd = row end
  static constexpr std::uint64_t kEnd = ~std::uint64_t{0};
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Extent {
  Cell first;
  Cell last;
};

/// Extent of a URN over rows (token counts per row), by linear scan.
/// nullopt when any part of it names nothing.
std::optional<Extent> oracle_extent(const CtsUrn& urn, const std::vector<DottedRef>& refs,
                                    const std::vector<std::size_t>& token_counts);

/// Leaf references a passage covers, by linear scan. nullopt when unresolvable.
std::optional<std::vector<DottedRef>> oracle_expand(const PassageRef& passage, const std::vector<DottedRef>& refs);

/// Record URNs (kind, urn) of annotations overlapping `query`, by scanning every annotation.
std::vector<std::pair<AnnotationKind, std::string>> oracle_overlapping(const Catalog& catalog, const CtsUrn& query,
                                                                       std::optional<AnnotationKind> kind);

/// nullopt when either URN is unresolvable in the version.
std::optional<bool> oracle_contains(const CtsUrn& container, const CtsUrn& item, const std::vector<DottedRef>& refs,
                                    const std::vector<std::size_t>& token_counts);

/// role -> contributor -> count, by set union.
std::map<std::tuple<std::string, std::string>, std::size_t> oracle_aggregate(
    const std::vector<AttributionRecord>& records);

// --- generators -------------------------------------------------------------

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t uniform(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  template <typename T>
  const T& pick(const std::vector<T>& items) { return items[uniform(0, items.size() - 1)]; }
  std::string ident(std::size_t min_len, std::size_t max_len, std::string_view alphabet);
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Hierarchical references in document order: `count` leaves of depth `depth`.
std::vector<DottedRef> random_refs(Gen& gen, std::size_t count, std::size_t depth);

/// Rows of 1..max_words words, some with detached punctuation.
std::vector<TextRow> random_rows(Gen& gen, const std::vector<DottedRef>& refs, std::size_t max_words = 8);

/// A passage URN over `version`: whole version, prefix, leaf, token, or range of
/// these; sometimes unresolvable.
CtsUrn random_passage_urn(Gen& gen, const CtsUrn& version, const std::vector<DottedRef>& refs,
                          const std::vector<std::size_t>& token_counts, double unresolvable = 0.05);

CtsUrn random_cts_urn(Gen& gen);
Cite2Urn random_cite2_urn(Gen& gen);

}  // namespace atlas::testing
