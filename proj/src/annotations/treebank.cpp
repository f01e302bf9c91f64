#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "json_support.hpp"

namespace atlas {

using namespace detail;

namespace {

TreeWord parse_word(const json& item) {
  require_object(item, "word");
  TreeWord word;
  word.id = require_integer(item, "id");
  if (word.id <= 0) throw Error(ErrorCode::SchemaError, "word id must be positive");
  word.value = require_string(item, "value");
  word.head_id = require_integer(item, "head_id");
  if (word.head_id < 0) throw Error(ErrorCode::SchemaError, "head_id must be non-negative");
  word.relation = optional_string(item, "relation");
  word.lemma = optional_string(item, "lemma");
  word.tag = optional_string(item, "tag");
  word.extra = unknown_fields(item, {"id", "value", "head_id", "relation", "lemma", "tag"});
  return word;
}

SyntaxTree parse_tree(const json& item) {
  require_object(item, "tree");
  SyntaxTree tree;
  tree.urn = cite2_field(require_string(item, "urn"));
  for (std::string_view key : {"treebank_id", "trebank_id"}) {
    if (item.contains(key)) {
      const auto& v = item.at(key);
      tree.treebank_id = v.is_string() ? v.get<std::string>() : v.dump();
      tree.treebank_id_key = key;
      break;
    }
  }
  std::unordered_set<std::int64_t> ids;
  for (const auto& w : require_array(item, "words")) {
    auto word = parse_word(w);
    if (!ids.insert(word.id).second) {
      throw Error(ErrorCode::SchemaError, "word id " + std::to_string(word.id) + " repeats");
    }
    tree.words.push_back(std::move(word));
  }
  if (item.contains("references")) {
    std::vector<CtsUrn> refs;
    for (const auto& r : require_array(item, "references")) {
      if (!r.is_string()) throw Error(ErrorCode::SchemaError, "reference must be a string");
      refs.push_back(cts_field(r.get<std::string>()));
    }
    tree.references = std::move(refs);
  }
  tree.extra = unknown_fields(item, {"urn", "treebank_id", "trebank_id", "words", "references"});
  return tree;
}

}  // namespace

std::vector<SyntaxTree> parse_treebank_json(std::string_view bytes) {
  std::vector<SyntaxTree> trees;
  for_each_record(parse_document(bytes), [&](const json& item, std::size_t) { trees.push_back(parse_tree(item)); });
  return trees;
}

json to_json(const SyntaxTree& tree) {
  json out = json::object();
  out["urn"] = tree.urn.str();
  if (tree.treebank_id) out[tree.treebank_id_key] = *tree.treebank_id;
  json words = json::array();
  for (const auto& w : tree.words) {
    json item = {{"id", w.id}, {"value", w.value}, {"head_id", w.head_id}};
    if (w.relation) item["relation"] = *w.relation;
    if (w.lemma) item["lemma"] = *w.lemma;
    if (w.tag) item["tag"] = *w.tag;
    merge_extra(item, w.extra);
    words.push_back(std::move(item));
  }
  out["words"] = std::move(words);
  if (tree.references) {
    json refs = json::array();
    for (const auto& r : *tree.references) refs.push_back(r.str());
    out["references"] = std::move(refs);
  }
  merge_extra(out, tree.extra);
  return out;
}

TreeReport validate_tree(const SyntaxTree& tree, ValidationMode mode) {
  TreeReport report;
  std::unordered_map<std::int64_t, std::int64_t> head_of;
  for (const auto& w : tree.words) head_of.emplace(w.id, w.head_id);

  std::unordered_set<std::int64_t> reported_dangling;
  for (const auto& w : tree.words) {
    if (w.head_id != 0 && !head_of.count(w.head_id) && reported_dangling.insert(w.head_id).second) {
      report.issues.push_back({ErrorCode::DanglingHead, w.head_id,
                               "word " + std::to_string(w.id) + " points to missing head " +
                                   std::to_string(w.head_id)});
    }
  }

  // 0 = unvisited, 1 = on the current path, 2 = settled
  std::unordered_map<std::int64_t, int> state;
  for (const auto& w : tree.words) {
    if (state[w.id] != 0) continue;
    std::vector<std::int64_t> path;
    std::int64_t current = w.id;
    while (current != 0 && head_of.count(current) && state[current] == 0) {
      state[current] = 1;
      path.push_back(current);
      current = head_of[current];
    }
    if (current != 0 && head_of.count(current) && state[current] == 1) {
      auto begin = std::find(path.begin(), path.end(), current);
      auto smallest = *std::min_element(begin, path.end());
      std::string members;
      for (auto it = begin; it != path.end(); ++it) members += (it == begin ? "" : " ") + std::to_string(*it);
      report.issues.push_back({ErrorCode::CyclicHeads, smallest, "cycle through words " + members});
    }
    for (auto id : path) state[id] = 2;
  }

  if (mode == ValidationMode::Strict && !report.ok()) {
    const auto& first = report.issues.front();
    std::string detail = std::to_string(first.word_id);
    for (const auto& issue : report.issues) detail += "; " + issue.detail;
    throw Error(first.code, detail);
  }
  return report;
}

}  // namespace atlas
