#include "json_support.hpp"

namespace atlas {

using namespace detail;

namespace {

// Reference whose passage holds `ve_ref`; ranges that need an index to decide are
// accepted on their start endpoint.
const CtsUrn* owning_reference(const std::vector<CtsUrn>& references, const VeRef& ve_ref) {
  for (const auto& reference : references) {
    if (!reference.passage) continue;
    auto candidate = reference.with_passage(PassageRef::point(ve_ref.ref, ve_ref.token));
    try {
      if (urn_contains(reference, candidate)) return &reference;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IndexRequired) return &reference;
      throw;
    }
  }
  return nullptr;
}

CommentaryNote parse_note(const json& item) {
  require_object(item, "note");
  CommentaryNote note;
  note.urn = cite2_field(require_string(item, "urn"));
  const auto& references = require_array(item, "references");
  if (references.empty()) throw Error(ErrorCode::SchemaError, "\"references\" is empty");
  for (const auto& r : references) {
    if (!r.is_string()) throw Error(ErrorCode::SchemaError, "reference must be a string");
    note.references.push_back(cts_field(r.get<std::string>()));
  }
  note.body_html = require_string(item, "commentary");
  note.fragment = optional_string(item, "fragment");
  if (item.contains("ve_refs")) {
    std::vector<VeRef> refs;
    for (const auto& v : require_array(item, "ve_refs")) {
      if (!v.is_string()) throw Error(ErrorCode::BadVeRef, "ve_ref must be a string");
      auto ve_ref = VeRef::parse(v.get<std::string>());
      if (!owning_reference(note.references, ve_ref)) {
        throw Error(ErrorCode::BadVeRef, "'" + ve_ref.str() + "' lies under none of the note's references");
      }
      refs.push_back(std::move(ve_ref));
    }
    note.ve_refs = std::move(refs);
  }
  if (item.contains("witnesses")) {
    std::vector<Witness> witnesses;
    for (const auto& w : require_array(item, "witnesses")) {
      require_object(w, "witness");
      witnesses.push_back(
          Witness{require_string(w, "value"), require_string(w, "label"), unknown_fields(w, {"value", "label"})});
    }
    note.witnesses = std::move(witnesses);
  }
  if (auto it = item.find("idx"); it != item.end()) note.idx = *it;

  auto kind = optional_string(item, "kind");
  if (kind) {
    auto parsed = parse_annotation_kind(*kind);
    if (!parsed || (*parsed != AnnotationKind::Commentary && *parsed != AnnotationKind::TextualNote)) {
      throw Error(ErrorCode::SchemaError, "note kind '" + *kind + "' is not commentary or textual-note");
    }
    note.kind = *parsed;
  } else {
    note.kind = note.witnesses ? AnnotationKind::TextualNote : AnnotationKind::Commentary;
  }
  if (note.kind == AnnotationKind::Commentary && note.witnesses && !note.witnesses->empty()) {
    throw Error(ErrorCode::SchemaError, "plain commentary cannot carry witnesses");
  }
  note.extra = unknown_fields(item, {"urn", "references", "commentary", "fragment", "ve_refs", "witnesses", "idx"});
  return note;
}

}  // namespace

std::vector<CtsUrn> CommentaryNote::token_targets() const {
  std::vector<CtsUrn> out;
  if (!ve_refs) return out;
  for (const auto& ve_ref : *ve_refs) {
    if (const auto* owner = owning_reference(references, ve_ref)) {
      out.push_back(owner->with_passage(PassageRef::point(ve_ref.ref, ve_ref.token)));
    }
  }
  return out;
}

std::vector<CommentaryNote> parse_commentary(std::string_view bytes) {
  std::vector<CommentaryNote> notes;
  for_each_record(parse_document(bytes), [&](const json& item, std::size_t) { notes.push_back(parse_note(item)); });
  return notes;
}

json to_json(const CommentaryNote& note) {
  json out = json::object();
  json refs = json::array();
  for (const auto& r : note.references) refs.push_back(r.str());
  out["references"] = std::move(refs);
  out["commentary"] = note.body_html;
  if (note.fragment) out["fragment"] = *note.fragment;
  if (note.ve_refs) {
    json v = json::array();
    for (const auto& r : *note.ve_refs) v.push_back(r.str());
    out["ve_refs"] = std::move(v);
  }
  if (!note.idx.is_null()) out["idx"] = note.idx;
  out["urn"] = note.urn.str();
  if (note.witnesses) {
    json w = json::array();
    for (const auto& witness : *note.witnesses) {
      json item = {{"value", witness.value}, {"label", witness.label}};
      merge_extra(item, witness.extra);
      w.push_back(std::move(item));
    }
    out["witnesses"] = std::move(w);
  }
  merge_extra(out, note.extra);
  return out;
}

}  // namespace atlas
