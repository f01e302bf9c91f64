#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "atlas/error.hpp"
#include "atlas/text.hpp"
#include "atlas/urn.hpp"

namespace atlas {

using json = nlohmann::json;

enum class AnnotationKind {
  Commentary,
  TextualNote,
  Alignment,
  SyntaxTree,
  Conllu,
  DictionaryCitation,
  Audio,
  Metrical,
  Grammar,
};

inline constexpr AnnotationKind kAllAnnotationKinds[] = {
    AnnotationKind::Commentary, AnnotationKind::TextualNote,        AnnotationKind::Alignment,
    AnnotationKind::SyntaxTree, AnnotationKind::Conllu,             AnnotationKind::DictionaryCitation,
    AnnotationKind::Audio,      AnnotationKind::Metrical,           AnnotationKind::Grammar,
};

std::string_view to_string(AnnotationKind kind);
std::optional<AnnotationKind> parse_annotation_kind(std::string_view name);

// --- commentary and textual notes -------------------------------------------

struct Witness {
  std::string value;
  std::string label;
  json extra = json::object();
};

struct CommentaryNote {
  Cite2Urn urn;
  std::vector<CtsUrn> references;
  std::optional<std::string> fragment;
  std::optional<std::vector<VeRef>> ve_refs;
  std::string body_html;
  AnnotationKind kind = AnnotationKind::Commentary;
  std::optional<std::vector<Witness>> witnesses;
  json idx;  // ordinal as written (string or number); null when absent
  json extra = json::object();

  /// CTS URN of every token named by ve_refs, attached to the reference that owns it.
  std::vector<CtsUrn> token_targets() const;
};

std::vector<CommentaryNote> parse_commentary(std::string_view bytes);
json to_json(const CommentaryNote& note);

// --- translation alignments -------------------------------------------------

struct AlignmentRecord {
  Cite2Urn urn;
  std::vector<std::vector<CtsUrn>> relations;
  json extra = json::object();
};

std::vector<AlignmentRecord> parse_alignments(std::string_view bytes);
json to_json(const AlignmentRecord& record);

/// Token pairs of a record: the cross product of every pair of adjacent groups.
std::vector<std::pair<CtsUrn, CtsUrn>> alignment_pairs(const AlignmentRecord& record);

// --- syntax trees -----------------------------------------------------------

struct TreeWord {
  std::int64_t id = 0;
  std::string value;
  std::int64_t head_id = 0;
  std::optional<std::string> relation;
  std::optional<std::string> lemma;
  std::optional<std::string> tag;
  json extra = json::object();
};

struct SyntaxTree {
  Cite2Urn urn;
  std::optional<std::string> treebank_id;
  std::string treebank_id_key = "treebank_id";  // "trebank_id" in some published data
  std::vector<TreeWord> words;
  std::optional<std::vector<CtsUrn>> references;
  json extra = json::object();
};

std::vector<SyntaxTree> parse_treebank_json(std::string_view bytes);
json to_json(const SyntaxTree& tree);

enum class ValidationMode { Strict, Lenient };

struct TreeIssue {
  ErrorCode code;  // DanglingHead or CyclicHeads
  std::int64_t word_id;
  std::string detail;
};

struct TreeReport {
  std::vector<TreeIssue> issues;
  bool ok() const noexcept { return issues.empty(); }
};

/// Checks that heads form a forest rooted at 0. Strict mode throws the first
/// issue as an Error; lenient mode only reports.
TreeReport validate_tree(const SyntaxTree& tree, ValidationMode mode);

// --- CoNLL-U ----------------------------------------------------------------

struct ConlluToken {
  std::uint32_t index = 0;
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;
  std::vector<std::pair<std::string, std::string>> feats;
  std::optional<std::uint32_t> head;
  std::string deprel;
  std::string deps;
  std::string misc;

  /// Head or relation missing.
  bool partial() const noexcept { return !head || deprel.empty(); }

  friend bool operator==(const ConlluToken&, const ConlluToken&) = default;
};

struct SentenceAnalysis {
  DottedRef ref;
  std::vector<ConlluToken> tokens;

  friend bool operator==(const SentenceAnalysis&, const SentenceAnalysis&) = default;
};

/// Accepts standard 10-column CoNLL-U ("# sent_id =" or "# ref =" names the
/// passage) and the 11-column variant whose rows start with the reference and a
/// 0-based index. Both normalize to 1-based indices with 0 as the root sentinel.
std::vector<SentenceAnalysis> parse_conllu(std::string_view bytes);
std::string write_conllu(std::span<const SentenceAnalysis> sentences);
json to_json(const SentenceAnalysis& sentence);
SentenceAnalysis sentence_from_json(const json& value);

// --- dictionaries -----------------------------------------------------------

struct DictionaryCitation {
  Cite2Urn urn;
  std::optional<std::string> ref;
  json quote;  // null or string
  std::optional<CtsUrn> target;
  json extra = json::object();
  json data_extra = json::object();
  bool has_data = false;
  bool has_quote = false;
  bool has_target_key = false;  // "urn" present in data, possibly null
};

struct Sense {
  std::optional<std::string> label;
  Cite2Urn urn;
  std::optional<std::string> definition;
  std::vector<DictionaryCitation> citations;
  std::optional<std::vector<Sense>> children;
  bool has_citations = false;
  json extra = json::object();
};

struct DictionaryEntry {
  std::string headword;
  Cite2Urn urn;
  std::optional<std::string> content_html;
  std::vector<Sense> senses;
  json extra = json::object();
  json data_extra = json::object();
  bool has_data = false;
  bool has_senses = false;
};

/// Accepts a single entry object or an array of entries.
std::vector<DictionaryEntry> parse_dictionary(std::string_view bytes);
json to_json(const DictionaryEntry& entry);

/// Depth-first walk over an entry's sense tree.
std::vector<const Sense*> flatten_senses(const DictionaryEntry& entry);

/// A citation inside a dictionary entry, together with where it sits.
struct CitationRef {
  std::string headword;
  Cite2Urn entry_urn;
  Cite2Urn sense_urn;
  DictionaryCitation citation;
};

std::vector<CitationRef> entry_citations(const DictionaryEntry& entry);
json to_json(const CitationRef& citation);

// --- audio ------------------------------------------------------------------

struct AudioAnnotation {
  CtsUrn target;
  std::string media_url;
};

std::vector<AudioAnnotation> parse_audio_tsv(std::string_view bytes);
std::string write_audio_tsv(std::span<const AudioAnnotation> annotations);
json to_json(const AudioAnnotation& annotation);

// --- sub-token spans (metrical analyses) ------------------------------------

inline constexpr std::string_view kBoundaryLabel = "foot-boundary";

struct SubTokenSpan {
  std::size_t start = 0;  // code points into the NFC row text
  std::size_t end = 0;
  std::string label;
  std::optional<std::uint32_t> group;
  json extra = json::object();

  bool is_boundary() const noexcept { return label == kBoundaryLabel; }
};

struct SubTokenSpanAnnotation {
  Cite2Urn urn;
  std::optional<CtsUrn> version;  // from a full URN in "ref" or from "version"
  DottedRef ref;
  std::string ref_text;  // "ref" as written
  bool version_key = false;
  std::vector<SubTokenSpan> spans;
  std::optional<std::string> credit;
  json extra = json::object();

  std::optional<CtsUrn> target() const;
};

std::vector<SubTokenSpanAnnotation> parse_subtoken_spans(std::string_view bytes);
json to_json(const SubTokenSpanAnnotation& annotation);

// --- grammar links ----------------------------------------------------------

struct GrammarTarget {
  std::string text;  // as written
  std::optional<CtsUrn> version;
  VeRef ve_ref;

  std::optional<CtsUrn> urn() const;
};

struct GrammarLink {
  std::string entry_id;
  std::string title;
  std::string body_html;
  std::optional<CtsUrn> version;
  std::vector<GrammarTarget> targets;
  json extra = json::object();
};

std::vector<GrammarLink> parse_grammar_links(std::string_view bytes);
json to_json(const GrammarLink& link);

// --- attributions -----------------------------------------------------------

struct AttributionRecord {
  std::string role;
  std::string person_name;
  std::optional<std::string> organization;
  std::vector<Cite2Urn> references;
  json extra = json::object();
  json person_extra = json::object();
  json organization_extra = json::object();
  json data_extra = json::object();
  bool has_data = false;

  /// "name, organization" or just the name.
  std::string contributor() const;
};

std::vector<AttributionRecord> parse_attributions(std::string_view bytes);
json to_json(const AttributionRecord& record);

// --- common annotation model ------------------------------------------------

/// A CoNLL-U sentence bound to the version it analyses.
struct ConlluSentence {
  CtsUrn version;
  SentenceAnalysis sentence;
};

using AnnotationPayload = std::variant<CommentaryNote, AlignmentRecord, SyntaxTree, ConlluSentence, CitationRef,
                                       AudioAnnotation, SubTokenSpanAnnotation, GrammarLink>;

/// Any annotation, reduced to its kind, identity and the CTS passages it targets.
struct Annotation {
  AnnotationKind kind;
  std::string record_urn;
  std::vector<CtsUrn> targets;
  AnnotationPayload payload;
};

Annotation make_annotation(CommentaryNote note);
Annotation make_annotation(AlignmentRecord record);
Annotation make_annotation(SyntaxTree tree);
Annotation make_annotation(ConlluSentence sentence);
Annotation make_annotation(CitationRef citation);
Annotation make_annotation(AudioAnnotation audio);
Annotation make_annotation(SubTokenSpanAnnotation spans);
Annotation make_annotation(GrammarLink link);

/// Native JSON shape of the payload.
json payload_json(const Annotation& annotation);
/// {kind, urn, data}
json envelope(const Annotation& annotation);

}  // namespace atlas
