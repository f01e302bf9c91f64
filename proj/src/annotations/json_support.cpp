#include "json_support.hpp"

namespace atlas::detail {

json parse_document(std::string_view bytes) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("invalid JSON: ") + e.what());
  }
}

const json& require_object(const json& value, std::string_view what) {
  if (!value.is_object()) throw Error(ErrorCode::SchemaError, std::string(what) + " must be a JSON object");
  return value;
}

const json& require_array(const json& object, std::string_view key) {
  auto it = object.find(key);
  if (it == object.end()) throw Error(ErrorCode::SchemaError, "missing \"" + std::string(key) + "\"");
  if (!it->is_array()) throw Error(ErrorCode::SchemaError, "\"" + std::string(key) + "\" must be an array");
  return *it;
}

std::string require_string(const json& object, std::string_view key) {
  auto it = object.find(key);
  if (it == object.end()) throw Error(ErrorCode::SchemaError, "missing \"" + std::string(key) + "\"");
  if (!it->is_string()) throw Error(ErrorCode::SchemaError, "\"" + std::string(key) + "\" must be a string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& object, std::string_view key) {
  auto it = object.find(key);
  if (it == object.end()) return std::nullopt;
  if (!it->is_string()) throw Error(ErrorCode::SchemaError, "\"" + std::string(key) + "\" must be a string");
  return it->get<std::string>();
}

std::int64_t require_integer(const json& object, std::string_view key) {
  auto it = object.find(key);
  if (it == object.end()) throw Error(ErrorCode::SchemaError, "missing \"" + std::string(key) + "\"");
  if (!it->is_number_integer()) {
    throw Error(ErrorCode::SchemaError, "\"" + std::string(key) + "\" must be an integer");
  }
  return it->get<std::int64_t>();
}

json unknown_fields(const json& object, std::initializer_list<std::string_view> known) {
  json out = json::object();
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool is_known = false;
    for (auto k : known) is_known = is_known || it.key() == k;
    if (!is_known) out[it.key()] = it.value();
  }
  return out;
}

void merge_extra(json& out, const json& extra) {
  for (auto it = extra.begin(); it != extra.end(); ++it) {
    if (!out.contains(it.key())) out[it.key()] = it.value();
  }
}

CtsUrn cts_field(const std::string& text) { return parse_cts_urn(text); }

Cite2Urn cite2_field(const std::string& text) { return parse_cite2_urn(text); }

}  // namespace atlas::detail
