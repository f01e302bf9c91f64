#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include "atlas/annotations.hpp"

namespace atlas::detail {

/// Parses a JSON document; syntax errors become SchemaError.
json parse_document(std::string_view bytes);

/// The document must be an array; each element is handed to `fn` with its
/// 1-based record number and errors are attributed to that record.
template <typename Fn>
void for_each_record(const json& doc, Fn&& fn) {
  if (!doc.is_array()) throw Error(ErrorCode::SchemaError, "expected a JSON array of records");
  std::size_t n = 0;
  for (const auto& item : doc) {
    ++n;
    try {
      fn(item, n);
    } catch (const Error& e) {
      if (e.locus()) throw;
      throw e.at(at_record(n));
    }
  }
}

const json& require_object(const json& value, std::string_view what);
const json& require_array(const json& object, std::string_view key);
std::string require_string(const json& object, std::string_view key);
std::optional<std::string> optional_string(const json& object, std::string_view key);
std::int64_t require_integer(const json& object, std::string_view key);

/// Copy of `object` without the listed keys.
json unknown_fields(const json& object, std::initializer_list<std::string_view> known);

/// Merges `extra` into `out` without overwriting keys already set.
void merge_extra(json& out, const json& extra);

CtsUrn cts_field(const std::string& text);
Cite2Urn cite2_field(const std::string& text);

}  // namespace atlas::detail
