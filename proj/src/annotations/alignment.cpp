#include "json_support.hpp"

namespace atlas {

using namespace detail;

namespace {

AlignmentRecord parse_record(const json& item) {
  require_object(item, "alignment record");
  AlignmentRecord record;
  record.urn = cite2_field(require_string(item, "urn"));
  bool any_token = false;
  for (const auto& group : require_array(item, "relations")) {
    if (!group.is_array()) throw Error(ErrorCode::SchemaError, "relation group must be an array");
    std::vector<CtsUrn> tokens;
    for (const auto& t : group) {
      if (!t.is_string()) throw Error(ErrorCode::SchemaError, "aligned token must be a URN string");
      auto urn = cts_field(t.get<std::string>());
      if (!urn.version || !urn.passage || urn.passage->is_range() || !urn.passage->start_token) {
        throw Error(ErrorCode::SchemaError, "'" + urn.str() + "' is not a token-level URN");
      }
      if (!tokens.empty() && !same_work_hierarchy(tokens.front(), urn)) {
        throw Error(ErrorCode::SchemaError, "group mixes versions: '" + tokens.front().without_passage().str() +
                                                "' and '" + urn.without_passage().str() + "'");
      }
      tokens.push_back(std::move(urn));
    }
    any_token = any_token || !tokens.empty();
    record.relations.push_back(std::move(tokens));
  }
  if (!record.relations.empty() && !any_token) {
    throw Error(ErrorCode::SchemaError, "record has only empty relation groups");
  }
  record.extra = unknown_fields(item, {"urn", "relations"});
  return record;
}

}  // namespace

std::vector<AlignmentRecord> parse_alignments(std::string_view bytes) {
  std::vector<AlignmentRecord> records;
  for_each_record(parse_document(bytes),
                  [&](const json& item, std::size_t) { records.push_back(parse_record(item)); });
  return records;
}

json to_json(const AlignmentRecord& record) {
  json relations = json::array();
  for (const auto& group : record.relations) {
    json g = json::array();
    for (const auto& urn : group) g.push_back(urn.str());
    relations.push_back(std::move(g));
  }
  json out = {{"urn", record.urn.str()}, {"relations", std::move(relations)}};
  merge_extra(out, record.extra);
  return out;
}

std::vector<std::pair<CtsUrn, CtsUrn>> alignment_pairs(const AlignmentRecord& record) {
  std::vector<std::pair<CtsUrn, CtsUrn>> pairs;
  for (std::size_t g = 0; g + 1 < record.relations.size(); ++g) {
    for (const auto& left : record.relations[g]) {
      for (const auto& right : record.relations[g + 1]) pairs.emplace_back(left, right);
    }
  }
  return pairs;
}

}  // namespace atlas
