#include "json_support.hpp"

namespace atlas {

std::string_view to_string(AnnotationKind kind) {
  switch (kind) {
    case AnnotationKind::Commentary: return "commentary";
    case AnnotationKind::TextualNote: return "textual-note";
    case AnnotationKind::Alignment: return "alignment";
    case AnnotationKind::SyntaxTree: return "syntax-tree";
    case AnnotationKind::Conllu: return "conllu";
    case AnnotationKind::DictionaryCitation: return "dictionary-citation";
    case AnnotationKind::Audio: return "audio";
    case AnnotationKind::Metrical: return "metrical";
    case AnnotationKind::Grammar: return "grammar";
  }
  return "unknown";
}

std::optional<AnnotationKind> parse_annotation_kind(std::string_view name) {
  for (auto kind : kAllAnnotationKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

Annotation make_annotation(CommentaryNote note) {
  auto targets = note.ve_refs ? note.token_targets() : note.references;
  auto kind = note.kind;
  auto urn = note.urn.str();
  return Annotation{kind, std::move(urn), std::move(targets), std::move(note)};
}

Annotation make_annotation(AlignmentRecord record) {
  std::vector<CtsUrn> targets;
  for (const auto& group : record.relations) targets.insert(targets.end(), group.begin(), group.end());
  auto urn = record.urn.str();
  return Annotation{AnnotationKind::Alignment, std::move(urn), std::move(targets), std::move(record)};
}

Annotation make_annotation(SyntaxTree tree) {
  auto targets = tree.references.value_or(std::vector<CtsUrn>{});
  auto urn = tree.urn.str();
  return Annotation{AnnotationKind::SyntaxTree, std::move(urn), std::move(targets), std::move(tree)};
}

Annotation make_annotation(ConlluSentence sentence) {
  auto target = sentence.version.with_passage(PassageRef::point(sentence.sentence.ref));
  auto urn = target.str();
  return Annotation{AnnotationKind::Conllu, std::move(urn), {std::move(target)}, std::move(sentence)};
}

Annotation make_annotation(CitationRef citation) {
  std::vector<CtsUrn> targets;
  if (citation.citation.target) targets.push_back(*citation.citation.target);
  auto urn = citation.citation.urn.str();
  return Annotation{AnnotationKind::DictionaryCitation, std::move(urn), std::move(targets), std::move(citation)};
}

Annotation make_annotation(AudioAnnotation audio) {
  auto urn = audio.target.str();
  std::vector<CtsUrn> targets{audio.target};
  return Annotation{AnnotationKind::Audio, std::move(urn), std::move(targets), std::move(audio)};
}

Annotation make_annotation(SubTokenSpanAnnotation spans) {
  std::vector<CtsUrn> targets;
  if (auto t = spans.target()) targets.push_back(std::move(*t));
  auto urn = spans.urn.str();
  return Annotation{AnnotationKind::Metrical, std::move(urn), std::move(targets), std::move(spans)};
}

Annotation make_annotation(GrammarLink link) {
  std::vector<CtsUrn> targets;
  for (const auto& t : link.targets) {
    if (auto urn = t.urn()) targets.push_back(std::move(*urn));
  }
  auto id = link.entry_id;
  return Annotation{AnnotationKind::Grammar, std::move(id), std::move(targets), std::move(link)};
}

json payload_json(const Annotation& annotation) {
  return std::visit(
      [](const auto& payload) -> json {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, ConlluSentence>) {
          json out = to_json(payload.sentence);
          out["version"] = payload.version.str();
          return out;
        } else {
          return to_json(payload);
        }
      },
      annotation.payload);
}

json envelope(const Annotation& annotation) {
  return {{"kind", to_string(annotation.kind)}, {"urn", annotation.record_urn}, {"data", payload_json(annotation)}};
}

}  // namespace atlas
