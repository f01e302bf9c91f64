#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "atlas/catalog.hpp"

namespace atlas::api {

inline constexpr std::size_t kDefaultMaxParts = 100;

/// [{urn, label, language, row_count}] ordered by URN.
json library(const Catalog& catalog);

/// {urn, metadata, text_parts, prev?, next?, truncated}. At most `max_parts` rows
/// are returned; "truncated" says whether more were available.
json passage(const Catalog& catalog, const CtsUrn& urn, std::size_t max_parts = kDefaultMaxParts);

/// Envelopes of annotations_overlapping.
json annotations(const Catalog& catalog, const CtsUrn& urn, std::optional<AnnotationKind> kind);

/// [{role, contributor, count}]
json attribution_report(const Catalog& catalog);

/// {error, detail}
json error_body(std::string_view error, std::string_view detail);

/// 400 for malformed input, 404 for names that resolve to nothing.
int http_status(ErrorCode code);

}  // namespace atlas::api
