#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "atlas/annotations.hpp"
#include "oracles.hpp"

using namespace atlas;
using atlas::testing::Gen;
using atlas::testing::fixture;

namespace {

Error error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error thrown";
  return Error(ErrorCode::IoError, "");
}

}  // namespace

// --- dictionaries -------------------------------------------------------------

TEST(Dictionary, CunliffeEntry) {
  auto entries = parse_dictionary(fixture("cunliffe-entry.json"));
  ASSERT_EQ(entries.size(), 1u);
  const auto& entry = entries[0];
  EXPECT_EQ(entry.headword, "ἀγνηροῖη");
  EXPECT_EQ(entry.urn.str(), "urn:cite2:exploreHomer:entries.atlas_v1:1.60");
  auto senses = flatten_senses(entry);
  ASSERT_EQ(senses.size(), 3u);
  EXPECT_EQ(senses[0]->label, "1");
  EXPECT_EQ(senses[2]->label, "");
  ASSERT_TRUE(entry.senses[1].children);
  EXPECT_EQ(entry.senses[1].children->size(), 1u);

  auto citations = entry_citations(entry);
  ASSERT_EQ(citations.size(), 3u);
  std::vector<std::string> targets;
  for (const auto& c : citations) targets.push_back(c.citation.target->passage->start.str());
  EXPECT_EQ(targets, (std::vector<std::string>{"12.46", "22.457", "9.700"}));
  EXPECT_EQ(citations[2].sense_urn.object_id, "1.119");
  EXPECT_TRUE(citations[0].citation.quote.is_null());
}

TEST(Dictionary, RoundTripsJson) {
  auto text = fixture("cunliffe-entry.json");
  auto entry = parse_dictionary(text)[0];
  EXPECT_EQ(to_json(entry), json::parse(text));
}

TEST(Dictionary, RejectsRepeatedSense) {
  auto text = R"({"headword": "a", "urn": "urn:cite2:x:e.v:1", "data": {"senses": [
    {"urn": "urn:cite2:x:s.v:1"}, {"urn": "urn:cite2:x:s.v:1"}]}})";
  EXPECT_EQ(error_of([&] { parse_dictionary(text); }).code(), ErrorCode::SchemaError);
}

// --- commentary ---------------------------------------------------------------

TEST(Commentary, MarloweTextualNote) {
  auto notes = parse_commentary(fixture("marlowe-note.json"));
  ASSERT_EQ(notes.size(), 1u);
  const auto& note = notes[0];
  EXPECT_EQ(note.kind, AnnotationKind::TextualNote);
  ASSERT_TRUE(note.witnesses);
  ASSERT_EQ(note.witnesses->size(), 1u);
  EXPECT_EQ((*note.witnesses)[0].value, "Rs");
  EXPECT_EQ((*note.witnesses)[0].label, "MS Rodenbach");
  EXPECT_EQ(note.fragment, "live with mee");
  EXPECT_EQ(note.idx, "1");
  auto targets = note.token_targets();
  ASSERT_EQ(targets.size(), 3u);
  EXPECT_EQ(targets[0].str(), "urn:cts:engLit:mds822-32.tpsth1-1599.pdl-eng:1.1.t2");
  EXPECT_EQ(to_json(note), json::parse(fixture("marlowe-note.json"))[0]);
}

TEST(Commentary, VeRefMustSitUnderAReference) {
  auto text = R"([{"urn": "urn:cite2:x:c.v:1", "references": ["urn:cts:x:a.b.c:1.1"],
                   "commentary": "", "ve_refs": ["1.2.t1"]}])";
  auto e = error_of([&] { parse_commentary(text); });
  EXPECT_EQ(e.code(), ErrorCode::BadVeRef);
  EXPECT_EQ(e.locus()->number, 1u);
  EXPECT_EQ(error_of([] { parse_commentary(R"([{"urn": "urn:cite2:x:c.v:1", "references": ["urn:cts:x:a.b.c:1.1"], "commentary": "",
                                                 "ve_refs": ["1.1"]}])"); })
                .code(),
            ErrorCode::BadVeRef);
}

// --- alignments ---------------------------------------------------------------

TEST(Alignment, ParrishRecord) {
  auto records = parse_alignments(fixture("iliad-alignment.json"));
  ASSERT_EQ(records.size(), 1u);
  ASSERT_EQ(records[0].relations.size(), 2u);
  EXPECT_EQ(records[0].relations[0].size(), 2u);
  EXPECT_EQ(records[0].relations[1].size(), 1u);
  auto pairs = alignment_pairs(records[0]);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].first.passage->start_token, 4u);
  EXPECT_EQ(pairs[1].first.passage->start_token, 5u);
  EXPECT_EQ(pairs[0].second.str(), "urn:cts:greekLit:tlg0012.tlg001.perseus-grc2:1.1.t1");
}

TEST(Alignment, Errors) {
  EXPECT_EQ(error_of([] { parse_alignments(R"([{"urn": "urn:cite2:x:a.v:1", "relations": [["urn:cts:x:a.b.c:1.1"]]}])"); })
                .code(),
            ErrorCode::SchemaError);
  EXPECT_EQ(error_of([] {
              parse_alignments(R"([{"urn": "urn:cite2:x:a.v:1", "relations": [["urn:cts:x:a.b.c:1.1.t1", "urn:cts:x:a.b.d:1.1.t1"]]}])");
            }).code(),
            ErrorCode::SchemaError);
  EXPECT_TRUE(parse_alignments("[]").empty());
}

// Pair count equals the sum of products of adjacent group sizes.
TEST(AlignmentProperty, PairCount) {
  Gen gen(3);
  for (int round = 0; round < 500; ++round) {
    AlignmentRecord record{parse_cite2_urn("urn:cite2:x:a.v:1"), {}, json::object()};
    auto groups = gen.uniform(0, 5);
    for (std::size_t g = 0; g < groups; ++g) {
      std::vector<CtsUrn> group;
      auto size = gen.uniform(g == 0 ? 1 : 0, 4);
      auto version = "urn:cts:x:a.b.v" + std::to_string(g);
      for (std::size_t i = 0; i < size; ++i) {
        group.push_back(parse_cts_urn(version + ":1.1.t" + std::to_string(i + 1)));
      }
      record.relations.push_back(std::move(group));
    }
    std::size_t expected = 0;
    for (std::size_t g = 0; g + 1 < record.relations.size(); ++g) {
      expected += record.relations[g].size() * record.relations[g + 1].size();
    }
    ASSERT_EQ(alignment_pairs(record).size(), expected);
    if (!record.relations.empty()) {
      auto reparsed = parse_alignments("[" + to_json(record).dump() + "]");
      ASSERT_EQ(reparsed[0].relations, record.relations);
    }
  }
}

// --- syntax trees -------------------------------------------------------------

TEST(Treebank, DanglingHeadInFixture) {
  auto trees = parse_treebank_json(fixture("iliad-treebank.json"));
  ASSERT_EQ(trees.size(), 1u);
  const auto& tree = trees[0];
  EXPECT_EQ(tree.treebank_id, "1");
  EXPECT_EQ(tree.treebank_id_key, "trebank_id");
  ASSERT_EQ(tree.words.size(), 2u);
  EXPECT_EQ(tree.words[1].value, "ῥ'");
  EXPECT_EQ(tree.words[1].lemma, "ῥέ");

  auto report = validate_tree(tree, ValidationMode::Lenient);
  ASSERT_EQ(report.issues.size(), 1u);
  EXPECT_EQ(report.issues[0].code, ErrorCode::DanglingHead);
  EXPECT_EQ(report.issues[0].word_id, 79);
  auto strict = error_of([&] { validate_tree(tree, ValidationMode::Strict); });
  EXPECT_EQ(strict.code(), ErrorCode::DanglingHead);
  EXPECT_TRUE(strict.detail().starts_with("79"));
  EXPECT_EQ(to_json(tree), json::parse(fixture("iliad-treebank.json"))[0]);
}

TEST(Treebank, Cycle) {
  SyntaxTree tree;
  tree.urn = parse_cite2_urn("urn:cite2:x:t.v:1");
  for (auto [id, head] : {std::pair{1, 2}, std::pair{2, 1}, std::pair{3, 0}}) {
    TreeWord word;
    word.id = id;
    word.value = "w" + std::to_string(id);
    word.head_id = head;
    tree.words.push_back(word);
  }
  auto report = validate_tree(tree, ValidationMode::Lenient);
  ASSERT_EQ(report.issues.size(), 1u);
  EXPECT_EQ(report.issues[0].code, ErrorCode::CyclicHeads);
}

// Strict validation accepts exactly the head maps that form a forest rooted at 0.
TEST(TreebankProperty, StrictAcceptsForests) {
  Gen gen(29);
  for (int round = 0; round < 2000; ++round) {
    SyntaxTree tree;
    tree.urn = parse_cite2_urn("urn:cite2:x:t.v:1");
    auto n = gen.uniform(1, 12);
    for (std::size_t i = 1; i <= n; ++i) {
      auto head = static_cast<std::int64_t>(gen.uniform(0, n + (gen.chance(0.05) ? 3 : 0)));
      TreeWord word;
      word.id = static_cast<std::int64_t>(i);
      word.value = "w";
      word.head_id = head;
      tree.words.push_back(word);
    }
    // Forest oracle: follow heads from every word; reaching 0 within n steps means no cycle.
    bool forest = true;
    for (const auto& w : tree.words) {
      auto h = w.head_id;
      std::size_t steps = 0;
      while (h != 0 && steps <= n) {
        if (h < 1 || h > static_cast<std::int64_t>(n)) {
          forest = false;
          break;
        }
        h = tree.words[static_cast<std::size_t>(h - 1)].head_id;
        ++steps;
      }
      if (h != 0) forest = false;
    }
    bool accepted = true;
    try {
      validate_tree(tree, ValidationMode::Strict);
    } catch (const Error&) {
      accepted = false;
    }
    ASSERT_EQ(accepted, forest);
    ASSERT_EQ(validate_tree(tree, ValidationMode::Lenient).ok(), forest);
  }
}

// --- CoNLL-U ------------------------------------------------------------------

TEST(Conllu, ElevenColumnDialect) {
  auto sentences = parse_conllu(fixture("iliad-grecy.conllu"));
  ASSERT_EQ(sentences.size(), 1u);
  const auto& s = sentences[0];
  EXPECT_EQ(s.ref.str(), "1.1.1");
  ASSERT_EQ(s.tokens.size(), 14u);
  EXPECT_EQ(s.tokens[0].index, 1u);
  EXPECT_EQ(s.tokens[0].form, "Θουκυδίδης");
  EXPECT_EQ(s.tokens[0].head, 3u);  // 0-based 2 becomes 1-based 3
  EXPECT_EQ(s.tokens[1].head, 1u);
  EXPECT_EQ(s.tokens[0].feats.size(), 3u);
  EXPECT_EQ(s.tokens[2].form, "ἔξυνέγραψε");
  EXPECT_TRUE(s.tokens[2].partial());
  EXPECT_EQ(s.tokens[2].misc, "συγγραφέω");
  EXPECT_EQ(s.tokens[9].form, ",");
  EXPECT_EQ(s.tokens[9].upos, "PUNCT");
}

// The same analysis written as standard CoNLL-U parses to the same value.
TEST(Conllu, DialectsAreEquivalent) {
  auto dialect = parse_conllu(fixture("iliad-grecy.conllu"));
  auto standard = write_conllu(dialect);
  EXPECT_NE(standard.find("# sent_id = 1.1.1"), std::string::npos);
  EXPECT_EQ(parse_conllu(standard), dialect);
  EXPECT_EQ(sentence_from_json(to_json(dialect[0])), dialect[0]);
}

TEST(Conllu, Errors) {
  EXPECT_EQ(error_of([] { parse_conllu("# ref = 1\n1\ta\tb\n"); }).code(), ErrorCode::ColumnCountError);
  EXPECT_EQ(error_of([] { parse_conllu("# ref = 1\n1\ta\t_\t_\t_\t_\t0\t_\t_\t_\n3\tb\t_\t_\t_\t_\t1\t_\t_\t_\n"); })
                .code(),
            ErrorCode::NonContiguousIndices);
  auto dangling = error_of([] { parse_conllu("# ref = 1\n1\ta\t_\t_\t_\t_\t5\t_\t_\t_\n"); });
  EXPECT_EQ(dangling.code(), ErrorCode::DanglingHead);
  EXPECT_EQ(dangling.locus()->number, 2u);
}

TEST(ConlluProperty, WriteParseRoundTrip) {
  Gen gen(31);
  for (int round = 0; round < 300; ++round) {
    std::vector<SentenceAnalysis> sentences;
    auto count = gen.uniform(1, 4);
    for (std::size_t s = 0; s < count; ++s) {
      SentenceAnalysis sentence{DottedRef::parse("1." + std::to_string(s + 1)), {}};
      auto n = gen.uniform(1, 10);
      for (std::uint32_t i = 1; i <= n; ++i) {
        ConlluToken t;
        t.index = i;
        t.form = gen.pick(std::vector<std::string>{"μῆνιν", ",", "sing", "ἄλγε'"});
        t.lemma = gen.chance(0.8) ? "lemma" : "";
        t.upos = "NOUN";
        if (gen.chance(0.5)) t.feats = {{"Case", "Nom"}, {"Number", "Sing"}};
        if (gen.chance(0.9)) t.head = static_cast<std::uint32_t>(gen.uniform(0, n));
        t.deprel = gen.chance(0.9) ? "nsubj" : "";
        sentence.tokens.push_back(std::move(t));
      }
      sentences.push_back(std::move(sentence));
    }
    ASSERT_EQ(parse_conllu(write_conllu(sentences)), sentences);
  }
}

// --- audio ----------------------------------------------------------------------

TEST(Audio, IliadClips) {
  auto text = fixture("iliad-audio.tsv");
  auto audio = parse_audio_tsv(text);
  ASSERT_EQ(audio.size(), 5u);
  for (std::size_t i = 0; i < audio.size(); ++i) {
    EXPECT_EQ(audio[i].target.passage->start.str(), "1." + std::to_string(i + 1));
    EXPECT_TRUE(audio[i].media_url.ends_with("/audio/1/line_" + std::to_string(i + 1) + ".mp4"));
  }
  EXPECT_EQ(write_audio_tsv(audio), text);
  auto e = error_of([] { parse_audio_tsv("urn:cts:x:a.b.c:1.1\n"); });
  EXPECT_EQ(e.code(), ErrorCode::BadColumnCount);
}

// --- metrical spans and grammar -------------------------------------------------

TEST(SubTokenSpans, MetricalFixture) {
  auto records = parse_subtoken_spans(fixture("metrical-iliad-1.1.json"));
  ASSERT_EQ(records.size(), 1u);
  const auto& r = records[0];
  EXPECT_EQ(r.target()->str(), "urn:cts:greekLit:tlg0012.tlg001.perseus-grc2:1.1");
  ASSERT_EQ(r.spans.size(), 2u);
  EXPECT_EQ(r.spans[0].label, "long");
  EXPECT_EQ(r.spans[1].group, 1u);
  EXPECT_EQ(r.credit, "© 2016 David Chamberlain under CC BY 4.0");
  EXPECT_EQ(to_json(r), json::parse(fixture("metrical-iliad-1.1.json"))[0]);
}

TEST(SubTokenSpans, Errors) {
  auto overlap = R"([{"urn": "urn:cite2:x:m.v:1", "ref": "1.1", "spans": [
      {"start": 0, "end": 3, "label": "long"}, {"start": 2, "end": 4, "label": "short"}]}])";
  EXPECT_EQ(error_of([&] { parse_subtoken_spans(overlap); }).code(), ErrorCode::OverlappingSpans);
  auto inverted = R"([{"urn": "urn:cite2:x:m.v:1", "ref": "1.1", "spans": [{"start": 3, "end": 1, "label": "long"}]}])";
  EXPECT_EQ(error_of([&] { parse_subtoken_spans(inverted); }).code(), ErrorCode::SchemaError);
  auto boundary = R"([{"urn": "urn:cite2:x:m.v:1", "ref": "1.1", "spans": [
      {"start": 0, "end": 2, "label": "long"}, {"start": 2, "end": 2, "label": "foot-boundary"},
      {"start": 2, "end": 5, "label": "short"}]}])";
  EXPECT_EQ(parse_subtoken_spans(boundary)[0].spans.size(), 3u);
}

TEST(Grammar, ImperfectOfContinuance) {
  auto links = parse_grammar_links(fixture("grammar-impf1.json"));
  ASSERT_EQ(links.size(), 1u);
  EXPECT_EQ(links[0].entry_id, "Impf1");
  EXPECT_EQ(links[0].title, "Imperfect of Continuance");
  ASSERT_EQ(links[0].targets.size(), 3u);
  EXPECT_EQ(links[0].targets[0].urn()->str(), "urn:cts:greekLit:tlg0012.tlg001.perseus-grc2:1.1.t2");
  auto twice = R"([{"entry_id": "a", "title": "", "body_html": "", "targets": ["1.1.t1"]},
                   {"entry_id": "a", "title": "", "body_html": "", "targets": ["1.1.t2"]}])";
  auto e = error_of([&] { parse_grammar_links(twice); });
  EXPECT_EQ(e.code(), ErrorCode::DuplicateEntryId);
  EXPECT_EQ(e.locus()->number, 2u);
}

// --- attributions ---------------------------------------------------------------

TEST(Attribution, TwoContributors) {
  auto records = parse_attributions(fixture("attributions.json"));
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].role, "Annotator");
  EXPECT_EQ(records[0].contributor(), "Alex Lessie, University of Pennsylvania, Philadelphia, PA, USA");
  EXPECT_EQ(records[0].references.size(), 8u);
  EXPECT_EQ(records[1].contributor(), "Farnoosh Shamsian, Universität Leipzig: Leipzig, Sachsen, DE");
  EXPECT_EQ(records[1].references.size(), 3u);
  EXPECT_EQ(to_json(records[0]), json::parse(fixture("attributions.json"))[0]);
}

// --- common model -----------------------------------------------------------------

TEST(Annotation, EnvelopeCarriesNativeShape) {
  auto note = parse_commentary(fixture("marlowe-note.json"))[0];
  auto a = make_annotation(note);
  EXPECT_EQ(a.kind, AnnotationKind::TextualNote);
  EXPECT_EQ(a.targets.size(), 3u);
  auto env = envelope(a);
  EXPECT_EQ(env["kind"], "textual-note");
  EXPECT_EQ(env["urn"], "urn:cite2:scaife-viewer:commentary.v1:commentary2");
  EXPECT_EQ(env["data"], to_json(note));
}

TEST(Annotation, KindNames) {
  for (auto kind : kAllAnnotationKinds) EXPECT_EQ(parse_annotation_kind(to_string(kind)), kind);
  EXPECT_FALSE(parse_annotation_kind("bogus"));
}
