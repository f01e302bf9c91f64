#include "atlas/api.hpp"

#include <algorithm>

namespace atlas::api {

namespace {

PassageRef window(const TokenizedText& text, std::size_t first, std::size_t last) {
  if (first == last) return PassageRef::point(text.rows()[first].ref);
  return PassageRef::range(text.rows()[first].ref, text.rows()[last].ref);
}

}  // namespace

json library(const Catalog& catalog) {
  json out = json::array();
  for (const auto* v : catalog.versions()) {
    out.push_back({{"urn", v->metadata.urn.str()},
                   {"label", v->metadata.label},
                   {"language", v->metadata.language},
                   {"row_count", v->text.size()}});
  }
  return out;
}

json passage(const Catalog& catalog, const CtsUrn& urn, std::size_t max_parts) {
  auto rows = resolve_passage(urn, catalog);
  const auto& data = *catalog.version(urn);
  const auto& text = data.text;
  const bool truncated = rows.size() > max_parts;
  if (truncated) rows.resize(max_parts);

  json parts = json::array();
  for (const auto& r : rows) {
    json tokens = json::array();
    for (const auto& t : r.tokens) {
      tokens.push_back({{"ve_ref", t.ve_ref.str()}, {"value", t.value}, {"kind", to_string(t.kind)}});
    }
    parts.push_back({{"ref", r.row->ref.str()}, {"text", r.row->text}, {"tokens", std::move(tokens)}});
  }
  json out = {{"urn", urn.str()},
              {"metadata",
               {{"label", data.metadata.label},
                {"language", data.metadata.language},
                {"citation_scheme", data.metadata.citation_scheme}}},
              {"text_parts", std::move(parts)},
              {"truncated", truncated}};

  if (urn.passage && !rows.empty()) {
    auto first = static_cast<std::size_t>(rows.front().row - text.rows().data());
    auto last = static_cast<std::size_t>(rows.back().row - text.rows().data());
    auto size = last - first + 1;
    auto version = urn.without_passage();
    if (first > 0) {
      auto begin = first >= size ? first - size : 0;
      out["prev"] = version.with_passage(window(text, begin, first - 1)).str();
    }
    if (last + 1 < text.size()) {
      auto end = std::min(text.size() - 1, last + size);
      out["next"] = version.with_passage(window(text, last + 1, end)).str();
    }
  }
  return out;
}

json annotations(const Catalog& catalog, const CtsUrn& urn, std::optional<AnnotationKind> kind) {
  json out = json::array();
  for (const auto& a : annotations_overlapping(urn, kind, catalog)) out.push_back(envelope(*a));
  return out;
}

json attribution_report(const Catalog& catalog) {
  json out = json::array();
  for (const auto& row : aggregate_attributions(catalog)) {
    out.push_back({{"role", row.role}, {"contributor", row.contributor}, {"count", row.count}});
  }
  return out;
}

json error_body(std::string_view error, std::string_view detail) {
  return {{"error", error}, {"detail", detail}};
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownVersion:
    case ErrorCode::UnknownReference:
    case ErrorCode::TokenOutOfRange:
      return 404;
    default:
      return 400;
  }
}

}  // namespace atlas::api
