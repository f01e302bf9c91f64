#include "atlas/urn.hpp"

#include <algorithm>
#include <charconv>

#include "atlas/error.hpp"

namespace atlas {
namespace {

constexpr std::string_view kCtsPrefix = "urn:cts:";
constexpr std::string_view kCite2Prefix = "urn:cite2:";

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    auto pos = text.find(sep, begin);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(begin));
      return out;
    }
    out.push_back(text.substr(begin, pos - begin));
    begin = pos + 1;
  }
}

// Identifier rule shared by every URN component: non-empty, no ':' and no whitespace.
void check_component(std::string_view value, std::string_view what, std::string_view whole) {
  if (value.empty()) {
    throw Error(ErrorCode::MalformedUrn, "empty " + std::string(what) + " in '" + std::string(whole) + "'");
  }
  for (char c : value) {
    if (c == ':' || is_space(c)) {
      throw Error(ErrorCode::MalformedUrn,
                  "invalid character in " + std::string(what) + " '" + std::string(value) + "'");
    }
  }
}

// ".tN" token suffix: 't' followed by up to nine digits.
std::optional<std::uint32_t> token_suffix(std::string_view part) {
  if (part.size() < 2 || part.size() > 10 || part[0] != 't') return std::nullopt;
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(part.data() + 1, part.data() + part.size(), value);
  if (ec != std::errc{} || ptr != part.data() + part.size()) return std::nullopt;
  return value;
}

std::pair<DottedRef, std::optional<std::uint32_t>> parse_endpoint(std::string_view text) {
  auto parts = split(text, '.');
  std::optional<std::uint32_t> token;
  if (parts.size() >= 2) {
    token = token_suffix(parts.back());
    if (token) {
      if (*token == 0) {
        throw Error(ErrorCode::MalformedUrn, "token index must be >= 1 in '" + std::string(text) + "'");
      }
      parts.pop_back();
    }
  }
  std::vector<std::string> owned;
  owned.reserve(parts.size());
  for (auto p : parts) {
    check_component(p, "citation component", text);
    owned.emplace_back(p);
  }
  return {DottedRef(std::move(owned)), token};
}

void append_endpoint(std::string& out, const DottedRef& ref, std::optional<std::uint32_t> token) {
  out += ref.str();
  if (token) {
    out += ".t";
    out += std::to_string(*token);
  }
}

}  // namespace

DottedRef::DottedRef(std::vector<std::string> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw Error(ErrorCode::MalformedUrn, "empty reference");
  for (const auto& p : parts_) {
    if (p.empty()) throw Error(ErrorCode::MalformedUrn, "empty citation component");
    for (char c : p) {
      if (c == '.' || c == ':' || c == '-' || is_space(c)) {
        throw Error(ErrorCode::MalformedUrn, "invalid citation component '" + p + "'");
      }
    }
  }
}

DottedRef DottedRef::parse(std::string_view text) {
  std::vector<std::string> parts;
  for (auto p : split(text, '.')) {
    check_component(p, "citation component", text);
    parts.emplace_back(p);
  }
  return DottedRef(std::move(parts));
}

std::string DottedRef::str() const {
  std::string out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += '.';
    out += parts_[i];
  }
  return out;
}

bool DottedRef::is_prefix_of(const DottedRef& other) const noexcept {
  return parts_.size() <= other.parts_.size() &&
         std::equal(parts_.begin(), parts_.end(), other.parts_.begin());
}

PassageRef PassageRef::point(DottedRef ref, std::optional<std::uint32_t> token) {
  return PassageRef{std::move(ref), token, std::nullopt, std::nullopt};
}

PassageRef PassageRef::range(DottedRef from, DottedRef to, std::optional<std::uint32_t> from_token,
                             std::optional<std::uint32_t> to_token) {
  return PassageRef{std::move(from), from_token, std::move(to), to_token};
}

PassageRef parse_passage(std::string_view text) {
  check_component(text, "passage", text);
  auto ends = split(text, '-');
  if (ends.size() > 2) {
    throw Error(ErrorCode::MalformedUrn, "passage has more than one '-': '" + std::string(text) + "'");
  }
  auto [start, start_token] = parse_endpoint(ends[0]);
  if (ends.size() == 1) return PassageRef::point(std::move(start), start_token);
  auto [end, end_token] = parse_endpoint(ends[1]);
  return PassageRef::range(std::move(start), std::move(end), start_token, end_token);
}

std::string format_passage(const PassageRef& passage) {
  std::string out;
  append_endpoint(out, passage.start, passage.start_token);
  if (passage.end) {
    out += '-';
    append_endpoint(out, *passage.end, passage.end_token);
  }
  return out;
}

CtsUrn CtsUrn::without_passage() const {
  CtsUrn copy = *this;
  copy.passage.reset();
  return copy;
}

CtsUrn CtsUrn::with_passage(PassageRef p) const {
  CtsUrn copy = *this;
  copy.passage = std::move(p);
  return copy;
}

std::string CtsUrn::str() const { return format_cts_urn(*this); }

CtsUrn parse_cts_urn(std::string_view text) {
  if (text.substr(0, kCtsPrefix.size()) != kCtsPrefix) {
    throw Error(ErrorCode::MalformedUrn, "expected scheme 'urn:cts:' in '" + std::string(text) + "'");
  }
  auto fields = split(text.substr(kCtsPrefix.size()), ':');
  if (fields.size() < 2) {
    throw Error(ErrorCode::MalformedUrn, "missing work hierarchy in '" + std::string(text) + "'");
  }
  if (fields.size() > 3) {
    throw Error(ErrorCode::MalformedUrn, "too many ':' separated components in '" + std::string(text) + "'");
  }
  CtsUrn urn;
  check_component(fields[0], "namespace", text);
  urn.ns = fields[0];

  check_component(fields[1], "work hierarchy", text);
  auto hierarchy = split(fields[1], '.');
  if (hierarchy.size() > 4) {
    throw Error(ErrorCode::MalformedUrn, "work hierarchy has more than four parts: '" + std::string(fields[1]) + "'");
  }
  for (auto part : hierarchy) check_component(part, "work hierarchy part", text);
  urn.text_group = hierarchy[0];
  if (hierarchy.size() > 1) urn.work = std::string(hierarchy[1]);
  if (hierarchy.size() > 2) urn.version = std::string(hierarchy[2]);
  if (hierarchy.size() > 3) urn.exemplar = std::string(hierarchy[3]);

  if (fields.size() == 3) {
    if (!urn.work) {
      throw Error(ErrorCode::MalformedUrn, "passage without work in '" + std::string(text) + "'");
    }
    urn.passage = parse_passage(fields[2]);
  }
  return urn;
}

std::string format_cts_urn(const CtsUrn& urn) {
  std::string out(kCtsPrefix);
  out += urn.ns;
  out += ':';
  out += urn.text_group;
  for (const auto* part : {&urn.work, &urn.version, &urn.exemplar}) {
    if (!*part) break;
    out += '.';
    out += **part;
  }
  if (urn.passage) {
    out += ':';
    out += format_passage(*urn.passage);
  }
  return out;
}

bool same_work_hierarchy(const CtsUrn& a, const CtsUrn& b) noexcept {
  return a.ns == b.ns && a.text_group == b.text_group && a.work == b.work && a.version == b.version &&
         a.exemplar == b.exemplar;
}

std::string Cite2Urn::str() const { return format_cite2_urn(*this); }

Cite2Urn parse_cite2_urn(std::string_view text) {
  if (text.substr(0, kCite2Prefix.size()) != kCite2Prefix) {
    throw Error(ErrorCode::MalformedUrn, "expected scheme 'urn:cite2:' in '" + std::string(text) + "'");
  }
  auto fields = split(text.substr(kCite2Prefix.size()), ':');
  if (fields.size() != 3) {
    throw Error(ErrorCode::MalformedUrn,
                "expected namespace:collection.version:object in '" + std::string(text) + "'");
  }
  check_component(fields[0], "namespace", text);
  check_component(fields[1], "collection", text);
  check_component(fields[2], "object id", text);
  auto dot = fields[1].find('.');
  if (dot == std::string_view::npos) {
    throw Error(ErrorCode::MalformedUrn, "collection '" + std::string(fields[1]) + "' lacks '.version'");
  }
  Cite2Urn urn{std::string(fields[0]), std::string(fields[1].substr(0, dot)),
               std::string(fields[1].substr(dot + 1)), std::string(fields[2])};
  check_component(urn.collection, "collection", text);
  check_component(urn.version, "collection version", text);
  return urn;
}

std::string format_cite2_urn(const Cite2Urn& urn) {
  std::string out(kCite2Prefix);
  out += urn.ns;
  out += ':';
  out += urn.collection;
  out += '.';
  out += urn.version;
  out += ':';
  out += urn.object_id;
  return out;
}

ReferenceIndex::ReferenceIndex(std::vector<DottedRef> refs) : refs_(std::move(refs)) {
  leaves_.reserve(refs_.size());
  for (std::size_t pos = 0; pos < refs_.size(); ++pos) {
    const auto& ref = refs_[pos];
    if (!leaves_.emplace(ref.str(), pos).second) {
      throw Error(ErrorCode::DuplicateRef, "reference '" + ref.str() + "' repeats");
    }
    std::string key;
    for (std::size_t i = 0; i < ref.depth(); ++i) {
      if (i) key += '.';
      key += ref.parts()[i];
      auto [it, inserted] = spans_.try_emplace(key, pos, pos);
      if (!inserted) it->second.second = pos;
    }
  }
}

std::optional<std::size_t> ReferenceIndex::position(const DottedRef& ref) const {
  auto it = leaves_.find(ref.str());
  if (it == leaves_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::pair<std::size_t, std::size_t>> ReferenceIndex::leaf_span(const DottedRef& ref) const {
  auto it = spans_.find(ref.str());
  if (it == spans_.end()) return std::nullopt;
  return it->second;
}

DocInterval ReferenceIndex::resolve(const PassageRef& passage) const {
  auto endpoint = [this](const DottedRef& ref, std::optional<std::uint32_t> token, bool is_start) {
    if (token) {
      auto pos = position(ref);
      if (!pos) throw Error(ErrorCode::UnknownReference, "no leaf reference '" + ref.str() + "'");
      return DocPosition{*pos, *token};
    }
    auto span = leaf_span(ref);
    if (!span) throw Error(ErrorCode::UnknownReference, "no reference '" + ref.str() + "'");
    return is_start ? DocPosition{span->first, 0} : DocPosition{span->second, DocPosition::kRowEnd};
  };
  DocInterval interval{endpoint(passage.start, passage.start_token, true),
                       endpoint(passage.last(), passage.last_token(), false)};
  if (interval.last < interval.first) {
    throw Error(ErrorCode::InvertedRange, "range end precedes start in '" + format_passage(passage) + "'");
  }
  return interval;
}

std::vector<DottedRef> expand_range(const PassageRef& passage, const ReferenceIndex& index) {
  auto interval = index.resolve(passage);
  return {index.refs().begin() + static_cast<std::ptrdiff_t>(interval.first.row),
          index.refs().begin() + static_cast<std::ptrdiff_t>(interval.last.row) + 1};
}

namespace {

// Hierarchical containment of a whole passage under one endpoint of the container.
bool under_endpoint(const DottedRef& ref, std::optional<std::uint32_t> token, const PassageRef& item) {
  if (token) {
    return item.start == ref && item.last() == ref && item.start_token == token && item.last_token() == token;
  }
  return ref.is_prefix_of(item.start) && ref.is_prefix_of(item.last());
}

}  // namespace

bool urn_contains(const CtsUrn& container, const CtsUrn& item, const ReferenceIndex* index) {
  if (!same_work_hierarchy(container, item)) return false;
  if (!container.passage) return true;
  const auto& outer = *container.passage;
  if (!item.passage) {
    if (!index) throw Error(ErrorCode::IndexRequired, "containment of a whole version needs a reference index");
    if (index->empty()) return true;
    DocInterval all{{0, 0}, {index->size() - 1, DocPosition::kRowEnd}};
    return index->resolve(outer).contains(all);
  }
  const auto& inner = *item.passage;

  if (index) return index->resolve(outer).contains(index->resolve(inner));

  auto point_contains = [&] {
    if (under_endpoint(outer.start, outer.start_token, inner)) return true;
    // An ancestor may cover exactly the same rows.
    auto ancestor = [&](const DottedRef& r) { return r.is_prefix_of(outer.start) && r != outer.start; };
    if (ancestor(inner.start) || ancestor(inner.last())) {
      throw Error(ErrorCode::IndexRequired, "containment of '" + format_passage(inner) + "' in '" +
                                                format_passage(outer) + "' needs a reference index");
    }
    return false;
  };
  if (!outer.is_range()) return point_contains();

  if (outer.start == *outer.end && outer.start_token == outer.end_token) return point_contains();
  // An endpoint's whole subtree is covered unless the other endpoint lies inside it.
  auto inside = [](const DottedRef& ref, const DottedRef& other, std::optional<std::uint32_t> other_token) {
    return ref.is_prefix_of(other) && (other != ref || other_token);
  };
  if (!outer.start_token && !inside(outer.start, *outer.end, outer.end_token) &&
      under_endpoint(outer.start, std::nullopt, inner)) {
    return true;
  }
  if (!outer.end_token && !inside(*outer.end, outer.start, outer.start_token) &&
      under_endpoint(*outer.end, std::nullopt, inner)) {
    return true;
  }
  throw Error(ErrorCode::IndexRequired,
              "containment in range '" + format_passage(outer) + "' needs a reference index");
}

}  // namespace atlas
