#include "json_support.hpp"

namespace atlas {

using namespace detail;

namespace {

AttributionRecord parse_record(const json& item) {
  require_object(item, "attribution");
  AttributionRecord record;
  record.role = require_string(item, "role");
  if (record.role.empty()) throw Error(ErrorCode::SchemaError, "empty role");
  const auto person = item.find("person");
  if (person == item.end()) throw Error(ErrorCode::SchemaError, "missing \"person\"");
  require_object(*person, "person");
  record.person_name = require_string(*person, "name");
  if (record.person_name.empty()) throw Error(ErrorCode::SchemaError, "empty person name");
  record.person_extra = unknown_fields(*person, {"name"});
  if (auto org = item.find("organization"); org != item.end() && !org->is_null()) {
    require_object(*org, "organization");
    record.organization = require_string(*org, "name");
    record.organization_extra = unknown_fields(*org, {"name"});
  }
  if (auto data = item.find("data"); data != item.end()) {
    require_object(*data, "data");
    record.has_data = true;
    if (data->contains("references")) {
      for (const auto& r : require_array(*data, "references")) {
        if (!r.is_string()) throw Error(ErrorCode::SchemaError, "reference must be a URN string");
        record.references.push_back(cite2_field(r.get<std::string>()));
      }
    }
    record.data_extra = unknown_fields(*data, {"references"});
  }
  record.extra = unknown_fields(item, {"role", "person", "organization", "data"});
  return record;
}

}  // namespace

std::string AttributionRecord::contributor() const {
  return organization ? person_name + ", " + *organization : person_name;
}

std::vector<AttributionRecord> parse_attributions(std::string_view bytes) {
  std::vector<AttributionRecord> records;
  for_each_record(parse_document(bytes), [&](const json& item, std::size_t) { records.push_back(parse_record(item)); });
  return records;
}

json to_json(const AttributionRecord& record) {
  json person = {{"name", record.person_name}};
  merge_extra(person, record.person_extra);
  json out = {{"role", record.role}, {"person", std::move(person)}};
  if (record.organization) {
    json org = {{"name", *record.organization}};
    merge_extra(org, record.organization_extra);
    out["organization"] = std::move(org);
  }
  if (record.has_data) {
    json refs = json::array();
    for (const auto& r : record.references) refs.push_back(r.str());
    json data = {{"references", std::move(refs)}};
    merge_extra(data, record.data_extra);
    out["data"] = std::move(data);
  }
  merge_extra(out, record.extra);
  return out;
}

}  // namespace atlas
