#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace atlas {

/// A citation reference such as "1.1.7": a non-empty list of non-empty components.
class DottedRef {
 public:
  DottedRef() = default;
  explicit DottedRef(std::vector<std::string> parts);

  /// Parses "1.1.7". Throws Error(MalformedUrn) on empty or invalid components.
  static DottedRef parse(std::string_view text);

  const std::vector<std::string>& parts() const noexcept { return parts_; }
  std::size_t depth() const noexcept { return parts_.size(); }
  bool empty() const noexcept { return parts_.empty(); }
  std::string str() const;

  /// True when every component of this ref is a leading component of `other`
  /// (a ref is a prefix of itself).
  bool is_prefix_of(const DottedRef& other) const noexcept;

  friend bool operator==(const DottedRef&, const DottedRef&) = default;
  friend auto operator<=>(const DottedRef&, const DottedRef&) = default;

 private:
  std::vector<std::string> parts_;
};

/// Passage component of a CTS URN: a point or an inclusive range, each endpoint
/// optionally narrowed to a 1-based token (".tN").
struct PassageRef {
  DottedRef start;
  std::optional<std::uint32_t> start_token;
  std::optional<DottedRef> end;
  std::optional<std::uint32_t> end_token;

  static PassageRef point(DottedRef ref, std::optional<std::uint32_t> token = std::nullopt);
  static PassageRef range(DottedRef from, DottedRef to,
                          std::optional<std::uint32_t> from_token = std::nullopt,
                          std::optional<std::uint32_t> to_token = std::nullopt);

  bool is_range() const noexcept { return end.has_value(); }
  const DottedRef& last() const noexcept { return end ? *end : start; }
  std::optional<std::uint32_t> last_token() const noexcept { return end ? end_token : start_token; }

  friend bool operator==(const PassageRef&, const PassageRef&) = default;
};

PassageRef parse_passage(std::string_view text);
std::string format_passage(const PassageRef& passage);

struct CtsUrn {
  std::string ns;
  std::string text_group;
  std::optional<std::string> work;
  std::optional<std::string> version;
  std::optional<std::string> exemplar;
  std::optional<PassageRef> passage;

  /// The same URN with the passage dropped.
  CtsUrn without_passage() const;
  CtsUrn with_passage(PassageRef p) const;
  std::string str() const;

  friend bool operator==(const CtsUrn&, const CtsUrn&) = default;
};

CtsUrn parse_cts_urn(std::string_view text);
std::string format_cts_urn(const CtsUrn& urn);

/// True when both URNs name the same namespace, text group, work, version and exemplar.
bool same_work_hierarchy(const CtsUrn& a, const CtsUrn& b) noexcept;

struct Cite2Urn {
  std::string ns;
  std::string collection;
  std::string version;
  std::string object_id;

  std::string str() const;

  friend bool operator==(const Cite2Urn&, const Cite2Urn&) = default;
  friend auto operator<=>(const Cite2Urn&, const Cite2Urn&) = default;
};

Cite2Urn parse_cite2_urn(std::string_view text);
std::string format_cite2_urn(const Cite2Urn& urn);

/// Position of a token-or-row boundary in document order. A row-level start uses
/// token 0 and a row-level end uses kRowEnd, so a row-level interval covers every
/// token of its rows.
struct DocPosition {
  static constexpr std::uint32_t kRowEnd = UINT32_MAX;

  std::size_t row = 0;
  std::uint32_t token = 0;

  friend auto operator<=>(const DocPosition&, const DocPosition&) = default;
};

struct DocInterval {
  DocPosition first;
  DocPosition last;

  bool intersects(const DocInterval& other) const noexcept {
    return !(last < other.first || other.last < first);
  }
  bool contains(const DocInterval& other) const noexcept {
    return first <= other.first && other.last <= last;
  }
};

/// Document order of the leaf references of one version.
class ReferenceIndex {
 public:
  ReferenceIndex() = default;
  /// Throws Error(DuplicateRef) when a reference repeats.
  explicit ReferenceIndex(std::vector<DottedRef> refs);

  std::size_t size() const noexcept { return refs_.size(); }
  bool empty() const noexcept { return refs_.empty(); }
  const DottedRef& at(std::size_t position) const { return refs_.at(position); }
  const std::vector<DottedRef>& refs() const noexcept { return refs_; }

  /// Position of an exact leaf reference.
  std::optional<std::size_t> position(const DottedRef& ref) const;
  /// First and last leaf positions under `ref` (a leaf or any ancestor of leaves).
  std::optional<std::pair<std::size_t, std::size_t>> leaf_span(const DottedRef& ref) const;

  /// Maps a passage onto document positions. Throws UnknownReference or InvertedRange.
  DocInterval resolve(const PassageRef& passage) const;

 private:
  std::vector<DottedRef> refs_;
  std::unordered_map<std::string, std::size_t> leaves_;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> spans_;
};

/// Leaf references covered by a passage, in document order.
std::vector<DottedRef> expand_range(const PassageRef& passage, const ReferenceIndex& index);

/// Hierarchical or document-order containment of `item` within `container`.
/// Throws Error(IndexRequired) when the answer depends on document order and no
/// index is given.
bool urn_contains(const CtsUrn& container, const CtsUrn& item, const ReferenceIndex* index = nullptr);

}  // namespace atlas

template <>
struct std::hash<atlas::DottedRef> {
  std::size_t operator()(const atlas::DottedRef& ref) const noexcept {
    return std::hash<std::string>{}(ref.str());
  }
};
