#include <unordered_set>

#include "json_support.hpp"

namespace atlas {

using namespace detail;

namespace {

DictionaryCitation parse_citation(const json& item) {
  require_object(item, "citation");
  DictionaryCitation citation;
  citation.urn = cite2_field(require_string(item, "urn"));
  if (auto it = item.find("data"); it != item.end()) {
    const auto& data = require_object(*it, "citation data");
    citation.has_data = true;
    citation.has_quote = data.contains("quote");
    citation.has_target_key = data.contains("urn");
    citation.ref = optional_string(data, "ref");
    if (auto q = data.find("quote"); q != data.end()) {
      if (!q->is_null() && !q->is_string()) throw Error(ErrorCode::SchemaError, "\"quote\" must be a string or null");
      citation.quote = *q;
    }
    if (auto u = data.find("urn"); u != data.end() && !u->is_null()) {
      if (!u->is_string()) throw Error(ErrorCode::SchemaError, "citation target must be a URN string");
      citation.target = cts_field(u->get<std::string>());
    }
    citation.data_extra = unknown_fields(data, {"ref", "quote", "urn"});
  }
  citation.extra = unknown_fields(item, {"urn", "data"});
  return citation;
}

Sense parse_sense(const json& item, std::unordered_set<std::string>& seen) {
  require_object(item, "sense");
  Sense sense;
  sense.label = optional_string(item, "label");
  sense.urn = cite2_field(require_string(item, "urn"));
  if (!seen.insert(sense.urn.str()).second) {
    throw Error(ErrorCode::SchemaError, "sense URN '" + sense.urn.str() + "' repeats within the entry");
  }
  sense.definition = optional_string(item, "definition");
  if (item.contains("citations")) {
    sense.has_citations = true;
    for (const auto& c : require_array(item, "citations")) sense.citations.push_back(parse_citation(c));
  }
  if (item.contains("children")) {
    std::vector<Sense> children;
    for (const auto& c : require_array(item, "children")) children.push_back(parse_sense(c, seen));
    sense.children = std::move(children);
  }
  sense.extra = unknown_fields(item, {"label", "urn", "definition", "citations", "children"});
  return sense;
}

DictionaryEntry parse_entry(const json& item) {
  require_object(item, "entry");
  DictionaryEntry entry;
  entry.headword = require_string(item, "headword");
  entry.urn = cite2_field(require_string(item, "urn"));
  std::unordered_set<std::string> seen;
  if (auto it = item.find("data"); it != item.end()) {
    const auto& data = require_object(*it, "entry data");
    entry.has_data = true;
    entry.content_html = optional_string(data, "content");
    if (data.contains("senses")) {
      entry.has_senses = true;
      for (const auto& s : require_array(data, "senses")) entry.senses.push_back(parse_sense(s, seen));
    }
    entry.data_extra = unknown_fields(data, {"content", "senses"});
  }
  entry.extra = unknown_fields(item, {"headword", "urn", "data"});
  return entry;
}

json citation_json(const DictionaryCitation& c) {
  json out = {{"urn", c.urn.str()}};
  if (c.has_data) {
    json data = json::object();
    if (c.ref) data["ref"] = *c.ref;
    if (c.has_quote) data["quote"] = c.quote;
    if (c.has_target_key) data["urn"] = c.target ? json(c.target->str()) : json(nullptr);
    merge_extra(data, c.data_extra);
    out["data"] = std::move(data);
  }
  merge_extra(out, c.extra);
  return out;
}

json sense_json(const Sense& sense) {
  json out = json::object();
  if (sense.label) out["label"] = *sense.label;
  out["urn"] = sense.urn.str();
  if (sense.definition) out["definition"] = *sense.definition;
  if (sense.has_citations) {
    json citations = json::array();
    for (const auto& c : sense.citations) citations.push_back(citation_json(c));
    out["citations"] = std::move(citations);
  }
  if (sense.children) {
    json children = json::array();
    for (const auto& child : *sense.children) children.push_back(sense_json(child));
    out["children"] = std::move(children);
  }
  merge_extra(out, sense.extra);
  return out;
}

void walk(const Sense& sense, std::vector<const Sense*>& out) {
  out.push_back(&sense);
  if (sense.children) {
    for (const auto& child : *sense.children) walk(child, out);
  }
}

}  // namespace

std::vector<DictionaryEntry> parse_dictionary(std::string_view bytes) {
  json doc = parse_document(bytes);
  if (doc.is_object()) doc = json::array({std::move(doc)});
  std::vector<DictionaryEntry> entries;
  for_each_record(doc, [&](const json& item, std::size_t) { entries.push_back(parse_entry(item)); });
  return entries;
}

json to_json(const DictionaryEntry& entry) {
  json out = {{"headword", entry.headword}, {"urn", entry.urn.str()}};
  if (entry.has_data) {
    json data = json::object();
    if (entry.content_html) data["content"] = *entry.content_html;
    if (entry.has_senses) {
      json senses = json::array();
      for (const auto& s : entry.senses) senses.push_back(sense_json(s));
      data["senses"] = std::move(senses);
    }
    merge_extra(data, entry.data_extra);
    out["data"] = std::move(data);
  }
  merge_extra(out, entry.extra);
  return out;
}

std::vector<const Sense*> flatten_senses(const DictionaryEntry& entry) {
  std::vector<const Sense*> out;
  for (const auto& s : entry.senses) walk(s, out);
  return out;
}

std::vector<CitationRef> entry_citations(const DictionaryEntry& entry) {
  std::vector<CitationRef> out;
  for (const auto* sense : flatten_senses(entry)) {
    for (const auto& c : sense->citations) out.push_back(CitationRef{entry.headword, entry.urn, sense->urn, c});
  }
  return out;
}

json to_json(const CitationRef& citation) {
  json out = citation_json(citation.citation);
  out["headword"] = citation.headword;
  out["entry_urn"] = citation.entry_urn.str();
  out["sense_urn"] = citation.sense_urn.str();
  return out;
}

}  // namespace atlas
