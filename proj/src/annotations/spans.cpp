#include <unordered_set>

#include "json_support.hpp"

namespace atlas {

using namespace detail;

namespace {

std::optional<CtsUrn> version_field(const json& item) {
  auto text = optional_string(item, "version");
  if (!text) return std::nullopt;
  auto urn = cts_field(*text);
  if (!urn.version || urn.passage) {
    throw Error(ErrorCode::SchemaError, "\"version\" must name a version without a passage");
  }
  return urn;
}

bool is_urn(std::string_view text) { return text.substr(0, 8) == "urn:cts:"; }

SubTokenSpan parse_span(const json& item) {
  require_object(item, "span");
  SubTokenSpan span;
  auto start = require_integer(item, "start");
  auto end = require_integer(item, "end");
  if (start < 0 || end < 0) throw Error(ErrorCode::SchemaError, "span offsets must be non-negative");
  span.start = static_cast<std::size_t>(start);
  span.end = static_cast<std::size_t>(end);
  span.label = require_string(item, "label");
  if (item.contains("group") && !item.at("group").is_null()) {
    auto group = require_integer(item, "group");
    if (group < 0) throw Error(ErrorCode::SchemaError, "span group must be non-negative");
    span.group = static_cast<std::uint32_t>(group);
  }
  if (span.end < span.start) {
    throw Error(ErrorCode::SchemaError,
                "span end " + std::to_string(span.end) + " precedes start " + std::to_string(span.start));
  }
  if (span.end == span.start && !span.is_boundary()) {
    throw Error(ErrorCode::SchemaError, "zero-width span must be a " + std::string(kBoundaryLabel));
  }
  span.extra = unknown_fields(item, {"start", "end", "label", "group"});
  return span;
}

SubTokenSpanAnnotation parse_span_record(const json& item) {
  require_object(item, "span record");
  SubTokenSpanAnnotation record;
  record.urn = cite2_field(require_string(item, "urn"));
  record.ref_text = require_string(item, "ref");
  record.version = version_field(item);
  record.version_key = item.contains("version");
  if (is_urn(record.ref_text)) {
    auto urn = cts_field(record.ref_text);
    if (!urn.version || !urn.passage || urn.passage->is_range() || urn.passage->start_token) {
      throw Error(ErrorCode::SchemaError, "\"ref\" must be a single row reference");
    }
    if (record.version && !same_work_hierarchy(*record.version, urn.without_passage())) {
      throw Error(ErrorCode::SchemaError, "\"ref\" and \"version\" disagree");
    }
    record.version = urn.without_passage();
    record.ref = urn.passage->start;
  } else {
    record.ref = DottedRef::parse(record.ref_text);
  }

  std::optional<std::pair<std::size_t, std::size_t>> previous;  // last non-boundary span
  for (const auto& s : require_array(item, "spans")) {
    auto span = parse_span(s);
    if (!record.spans.empty() && span.start < record.spans.back().start) {
      throw Error(ErrorCode::SchemaError, "spans are not ordered by start offset");
    }
    if (!span.is_boundary()) {
      if (previous && span.start < previous->second) {
        throw Error(ErrorCode::OverlappingSpans,
                    "span [" + std::to_string(span.start) + "," + std::to_string(span.end) + ") overlaps [" +
                        std::to_string(previous->first) + "," + std::to_string(previous->second) + ")");
      }
      previous = std::pair{span.start, span.end};
    }
    record.spans.push_back(std::move(span));
  }
  record.credit = optional_string(item, "credit");
  record.extra = unknown_fields(item, {"urn", "ref", "version", "spans", "credit"});
  return record;
}

GrammarLink parse_link(const json& item) {
  require_object(item, "grammar link");
  GrammarLink link;
  link.entry_id = require_string(item, "entry_id");
  if (link.entry_id.empty()) throw Error(ErrorCode::SchemaError, "empty entry_id");
  link.title = require_string(item, "title");
  link.body_html = require_string(item, "body_html");
  link.version = version_field(item);
  for (const auto& t : require_array(item, "targets")) {
    if (!t.is_string()) throw Error(ErrorCode::SchemaError, "grammar target must be a string");
    GrammarTarget target;
    target.text = t.get<std::string>();
    if (is_urn(target.text)) {
      auto urn = cts_field(target.text);
      if (!urn.version || !urn.passage || urn.passage->is_range() || !urn.passage->start_token) {
        throw Error(ErrorCode::BadVeRef, "'" + target.text + "' is not a token-level URN");
      }
      target.version = urn.without_passage();
      target.ve_ref = VeRef{urn.passage->start, *urn.passage->start_token};
    } else {
      target.version = link.version;
      target.ve_ref = VeRef::parse(target.text);
    }
    link.targets.push_back(std::move(target));
  }
  if (link.targets.empty()) throw Error(ErrorCode::SchemaError, "grammar link '" + link.entry_id + "' has no targets");
  link.extra = unknown_fields(item, {"entry_id", "title", "body_html", "version", "targets"});
  return link;
}

}  // namespace

std::optional<CtsUrn> SubTokenSpanAnnotation::target() const {
  if (!version) return std::nullopt;
  return version->with_passage(PassageRef::point(ref));
}

std::vector<SubTokenSpanAnnotation> parse_subtoken_spans(std::string_view bytes) {
  std::vector<SubTokenSpanAnnotation> out;
  for_each_record(parse_document(bytes), [&](const json& item, std::size_t) { out.push_back(parse_span_record(item)); });
  return out;
}

json to_json(const SubTokenSpanAnnotation& annotation) {
  json spans = json::array();
  for (const auto& s : annotation.spans) {
    json item = {{"start", s.start}, {"end", s.end}, {"label", s.label}};
    if (s.group) item["group"] = *s.group;
    merge_extra(item, s.extra);
    spans.push_back(std::move(item));
  }
  json out = {{"urn", annotation.urn.str()}, {"ref", annotation.ref_text}, {"spans", std::move(spans)}};
  if (annotation.version_key && annotation.version) out["version"] = annotation.version->str();
  if (annotation.credit) out["credit"] = *annotation.credit;
  merge_extra(out, annotation.extra);
  return out;
}

std::optional<CtsUrn> GrammarTarget::urn() const {
  if (!version) return std::nullopt;
  return version->with_passage(PassageRef::point(ve_ref.ref, ve_ref.token));
}

std::vector<GrammarLink> parse_grammar_links(std::string_view bytes) {
  std::vector<GrammarLink> out;
  std::unordered_set<std::string> ids;
  for_each_record(parse_document(bytes), [&](const json& item, std::size_t) {
    auto link = parse_link(item);
    if (!ids.insert(link.entry_id).second) {
      throw Error(ErrorCode::DuplicateEntryId, "entry_id '" + link.entry_id + "' repeats");
    }
    out.push_back(std::move(link));
  });
  return out;
}

json to_json(const GrammarLink& link) {
  json targets = json::array();
  for (const auto& t : link.targets) targets.push_back(t.text);
  json out = {{"entry_id", link.entry_id},
              {"title", link.title},
              {"body_html", link.body_html},
              {"targets", std::move(targets)}};
  if (link.version) out["version"] = link.version->str();
  merge_extra(out, link.extra);
  return out;
}

}  // namespace atlas
