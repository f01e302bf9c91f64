#include <gtest/gtest.h>

#include <filesystem>
#include <thread>

#include "atlas/catalog.hpp"
#include "atlas/persist.hpp"
#include "oracles.hpp"

using namespace atlas;
using namespace atlas::testing;

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

CtsUrn urn(const std::string& version, const std::string& passage = "") {
  return parse_cts_urn(passage.empty() ? version : version + ":" + passage);
}

std::vector<std::string> record_urns(const std::vector<std::shared_ptr<const Annotation>>& annotations) {
  std::vector<std::string> out;
  for (const auto& a : annotations) out.push_back(a->record_urn);
  return out;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("atlas-test-" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST(Catalog, RegisterAndResolve) {
  auto catalog = Catalog().register_version({urn(kIliadGrc), "grc", "Iliad", {"book", "line"}},
                                            read_text_tsv(fixture("iliad-grc.tsv")));
  auto rows = resolve_passage(urn(kIliadGrc, "1.1-1.7"), catalog);
  ASSERT_EQ(rows.size(), 7u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i - 1].row->seq, rows[i].row->seq);
  EXPECT_EQ(rows[0].row->text, "μῆνιν ἄειδε θεὰ Πηληϊάδεω Ἀχιλῆος");
  EXPECT_EQ(resolve_passage(urn(kIliadGrc, "1"), catalog).size(), 7u);
  EXPECT_EQ(resolve_passage(urn(kIliadGrc), catalog).size(), 7u);

  auto tokens = resolve_passage(urn(kIliadGrc, "1.2.t1-1.2.t3"), catalog);
  ASSERT_EQ(tokens.size(), 1u);
  ASSERT_EQ(tokens[0].tokens.size(), 3u);
  EXPECT_EQ(tokens[0].tokens[2].value, "ἣ");
}

TEST(Catalog, ResolveErrors) {
  auto catalog = Catalog().register_version({urn(kIliadGrc), "grc", "Iliad", {}}, read_text_tsv(fixture("iliad-grc.tsv")));
  EXPECT_EQ(error_of([&] { resolve_passage(urn(kIliadEng, "1.1"), catalog); }).code(), ErrorCode::UnknownVersion);
  EXPECT_EQ(error_of([&] { resolve_passage(urn(kIliadGrc, "2.1"), catalog); }).code(), ErrorCode::UnknownReference);
  EXPECT_EQ(error_of([&] { resolve_passage(urn(kIliadGrc, "1.5-1.2"), catalog); }).code(), ErrorCode::InvertedRange);
  EXPECT_EQ(error_of([&] { resolve_passage(urn(kIliadGrc, "1.1.t99"), catalog); }).code(), ErrorCode::TokenOutOfRange);
}

TEST(Catalog, RegisterErrors) {
  auto rows = read_text_tsv(fixture("iliad-grc.tsv"));
  auto catalog = Catalog().register_version({urn(kIliadGrc), "grc", "Iliad", {}}, rows);
  EXPECT_EQ(error_of([&] { catalog.register_version({urn(kIliadGrc), "grc", "Iliad", {}}, rows); }).code(),
            ErrorCode::DuplicateVersion);
  EXPECT_EQ(error_of([&] { Catalog().register_version({urn(kIliadGrc), "grc", "", {"book", "chapter", "line"}}, rows); })
                .code(),
            ErrorCode::InvariantViolation);
  auto repeated = rows;
  repeated[1].ref = repeated[0].ref;
  EXPECT_EQ(error_of([&] { Catalog().register_version({urn(kIliadGrc), "grc", "", {}}, repeated); }).code(),
            ErrorCode::InvariantViolation);
  EXPECT_EQ(error_of([&] { Catalog().register_version({urn(kIliadGrc, "1.1"), "grc", "", {}}, rows); }).code(),
            ErrorCode::InvariantViolation);
  EXPECT_EQ(Catalog().register_version({urn(kIliadGrc), "grc", "", {}}, {}).version(urn(kIliadGrc))->text.size(), 0u);
}

TEST(Catalog, NormalizesRowsToNfc) {
  std::vector<TextRow> rows{{1, DottedRef::parse("1"), "\xCE\xB5\xCC\x81"}};
  auto catalog = Catalog().register_version({urn("urn:cts:x:a.b.c"), "", "", {}}, rows);
  EXPECT_EQ(catalog.version(urn("urn:cts:x:a.b.c"))->text.rows()[0].text, "\xCE\xAD");
}

TEST(Catalog, FixtureOverlaps) {
  auto catalog = fixture_catalog();
  auto marlowe = annotations_overlapping(urn(kMarlowe, "1.1"), std::nullopt, catalog);
  EXPECT_EQ(record_urns(marlowe), (std::vector<std::string>{"urn:cite2:scaife-viewer:commentary.v1:commentary2"}));
  EXPECT_TRUE(annotations_overlapping(urn(kMarlowe, "1.2"), std::nullopt, catalog).empty());
  EXPECT_EQ(annotations_overlapping(urn(kMarlowe, "1.1.t3"), std::nullopt, catalog).size(), 1u);
  EXPECT_TRUE(annotations_overlapping(urn(kMarlowe, "1.1.t5"), std::nullopt, catalog).empty());

  auto audio = annotations_overlapping(urn(kIliadGrc, "1.1-1.3"), AnnotationKind::Audio, catalog);
  ASSERT_EQ(audio.size(), 3u);
  EXPECT_EQ(audio[0]->record_urn, urn(kIliadGrc, "1.1").str());

  auto line1 = annotations_overlapping(urn(kIliadGrc, "1.1"), std::nullopt, catalog);
  std::vector<AnnotationKind> kinds;
  for (const auto& a : line1) kinds.push_back(a->kind);
  EXPECT_EQ(kinds, (std::vector<AnnotationKind>{AnnotationKind::Alignment, AnnotationKind::Audio,
                                                 AnnotationKind::Metrical, AnnotationKind::Grammar}));
  EXPECT_EQ(error_of([&] { annotations_overlapping(urn("urn:cts:x:a.b.c", "1"), std::nullopt, catalog); }).code(),
            ErrorCode::UnknownVersion);
}

TEST(Catalog, AnnotationsOnUnloadedVersionsWaitForTheText) {
  auto audio = parse_audio_tsv(fixture("iliad-audio.tsv"));
  std::vector<Annotation> annotations;
  for (auto& a : audio) annotations.push_back(make_annotation(std::move(a)));
  auto early = Catalog().with_annotations(std::move(annotations));
  EXPECT_EQ(early.annotations().size(), 5u);
  EXPECT_TRUE(early.dangling().empty());
  auto loaded = early.register_version({urn(kIliadGrc), "grc", "", {}}, read_text_tsv(fixture("iliad-grc.tsv")));
  EXPECT_EQ(annotations_overlapping(urn(kIliadGrc), AnnotationKind::Audio, loaded).size(), 5u);
}

TEST(Catalog, SnapshotsAreImmutable) {
  auto base = Catalog().register_version({urn(kIliadGrc), "grc", "", {}}, read_text_tsv(fixture("iliad-grc.tsv")));
  auto before = annotations_overlapping(urn(kIliadGrc), std::nullopt, base);
  auto generation = base.generation();
  auto next = ingest(base, "audio", fixture("iliad-audio.tsv"), {}).catalog;
  next = next.register_version({urn(kIliadEng), "eng", "", {}}, read_text_tsv(fixture("iliad-parrish-eng.tsv")));
  EXPECT_EQ(annotations_overlapping(urn(kIliadGrc), std::nullopt, base).size(), before.size());
  EXPECT_EQ(base.versions().size(), 1u);
  EXPECT_EQ(base.generation(), generation);
  EXPECT_NE(next.generation(), generation);
  EXPECT_EQ(annotations_overlapping(urn(kIliadGrc), std::nullopt, next).size(), before.size() + 5);
}

TEST(Catalog, ReingestReplaces) {
  auto catalog = fixture_catalog();
  auto count = catalog.annotations().size();
  auto again = ingest(catalog, "audio", fixture("iliad-audio.tsv"), {}).catalog;
  again = ingest(again, "textual-note", fixture("marlowe-note.json"), {}).catalog;
  again = ingest(again, "attribution", fixture("attributions.json"), {}).catalog;
  EXPECT_EQ(again.annotations().size(), count);
  EXPECT_EQ(again.attributions().size(), 2u);
}

TEST(Catalog, UnalignedTokens) {
  auto catalog = fixture_catalog();
  auto eng = unaligned_tokens(urn(kIliadEng, "1.1"), catalog);
  // Parrish 1.1 has ten words; t4 and t5 are aligned.
  EXPECT_EQ(eng.size(), 8u);
  for (const auto& v : eng) EXPECT_TRUE(v.token != 4 && v.token != 5);
  EXPECT_TRUE(unaligned_tokens(urn(kIliadEng, "1.2"), catalog).empty());
}

// --- attributions -----------------------------------------------------------------

TEST(Attributions, FixtureReport) {
  auto rows = aggregate_attributions(fixture_catalog());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (AttributionReportRow{"Annotator", "Alex Lessie, University of Pennsylvania, Philadelphia, PA, USA", 8}));
  EXPECT_EQ(rows[1].count, 3u);
  EXPECT_TRUE(aggregate_attributions(Catalog()).empty());
}

TEST(Attributions, DuplicatesAcrossRecordsCountOnce) {
  auto ref = [](const char* id) { return parse_cite2_urn(std::string("urn:cite2:x:c.v:") + id); };
  AttributionRecord a{"Annotator", "P", std::nullopt, {ref("a"), ref("b"), ref("c")}};
  AttributionRecord b{"Annotator", "P", std::nullopt, {ref("c"), ref("d")}};
  auto rows = aggregate_attributions(Catalog().with_attributions({a, b}));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].count, 4u);
}

TEST(AttributionsProperty, MatchesSetUnion) {
  Gen gen(41);
  const std::vector<std::string> roles{"Annotator", "Translator", "Editor"};
  const std::vector<std::string> people{"A", "B", "C", "D"};
  const std::vector<std::string> orgs{"X", "Y"};
  for (int round = 0; round < 300; ++round) {
    std::vector<AttributionRecord> records;
    auto n = gen.uniform(0, 30);
    for (std::size_t i = 0; i < n; ++i) {
      AttributionRecord r;
      r.role = gen.pick(roles);
      r.person_name = gen.pick(people);
      if (gen.chance(0.7)) r.organization = gen.pick(orgs);
      auto refs = gen.uniform(0, 10);
      for (std::size_t k = 0; k < refs; ++k) {
        r.references.push_back(parse_cite2_urn("urn:cite2:x:c.v:" + std::to_string(gen.uniform(0, 40))));
      }
      records.push_back(std::move(r));
    }
    auto expected = oracle_aggregate(records);
    auto rows = aggregate_attributions(Catalog().with_attributions(records));
    std::map<std::tuple<std::string, std::string>, std::size_t> actual;
    for (const auto& row : rows) actual[{row.role, row.contributor}] += row.count;
    ASSERT_EQ(actual, expected);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      ASSERT_LE(std::tie(rows[i - 1].role, rows[i - 1].contributor), std::tie(rows[i].role, rows[i].contributor));
    }
  }
}

TEST(Attributions, FormatCount) {
  EXPECT_EQ(format_count(0), "0");
  EXPECT_EQ(format_count(999), "999");
  EXPECT_EQ(format_count(2081), "2,081");
  EXPECT_EQ(format_count(1234567), "1,234,567");
}

// --- link check -------------------------------------------------------------------

TEST(LinkCheck, TreebankAlone) {
  auto catalog = ingest(Catalog(), "syntax-tree", fixture("iliad-treebank.json"), {}).catalog;
  auto diagnostics = link_check(catalog);
  ASSERT_EQ(diagnostics.size(), 1u);
  EXPECT_EQ(diagnostics[0].code, "DanglingHead");
  EXPECT_TRUE(diagnostics[0].str().starts_with("DanglingHead 79"));
}

TEST(LinkCheck, UnmatchedCreditAndDanglingTarget) {
  auto catalog = ingest(Catalog(), "attribution", fixture("attributions.json"), {}).catalog;
  auto diagnostics = link_check(catalog);
  EXPECT_EQ(diagnostics.size(), 11u);
  for (const auto& d : diagnostics) EXPECT_EQ(d.code, "UnmatchedCredit");

  auto text = Catalog().register_version({urn(kMarlowe), "eng", "", {}}, read_text_tsv("1\t1.1\tCome live\n"));
  auto dangling = ingest(text, "textual-note", fixture("marlowe-note.json"), {}).catalog;
  auto found = link_check(dangling);
  ASSERT_EQ(found.size(), 2u);  // t3 and t4 do not exist in the shortened line
  EXPECT_EQ(found[0].code, "DanglingTarget");
}

TEST(LinkCheck, ConsistentSetIsClean) {
  auto catalog = Catalog().register_version({urn(kIliadGrc), "grc", "", {}}, read_text_tsv(fixture("iliad-grc.tsv")));
  catalog = ingest(catalog, "audio", fixture("iliad-audio.tsv"), {}).catalog;
  catalog = ingest(catalog, "metrical", fixture("metrical-iliad-1.1.json"), {}).catalog;
  catalog = ingest(catalog, "grammar", fixture("grammar-impf1.json"), {}).catalog;
  EXPECT_TRUE(link_check(catalog).empty());
}

TEST(LinkCheck, SpanBeyondRow) {
  auto catalog = Catalog().register_version({urn(kIliadGrc), "grc", "", {}}, read_text_tsv("1\t1.1\tμῆνιν\n"));
  auto spans = R"([{"urn": "urn:cite2:x:m.v:1", "ref": "urn:cts:greekLit:tlg0012.tlg001.perseus-grc2:1.1",
                    "spans": [{"start": 2, "end": 9, "label": "long"}]}])";
  catalog = ingest(catalog, "metrical", spans, {}).catalog;
  auto found = link_check(catalog);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].code, "SpanOutOfRange");
}

// --- overlap oracle -----------------------------------------------------------------

TEST(OverlapProperty, AgreesWithBruteForce) {
  Gen gen(7);
  auto version = urn("urn:cts:test:g.w.v");
  auto other = urn("urn:cts:test:g.w.other");
  for (int round = 0; round < 60; ++round) {
    auto refs = random_refs(gen, gen.uniform(1, 300), gen.uniform(1, 3));
    auto rows = random_rows(gen, refs);
    std::vector<std::size_t> counts;
    for (const auto& r : rows) counts.push_back(tokenize_row(r).size());
    auto catalog = Catalog().register_version({version, "", "", {}}, rows);
    std::vector<Annotation> annotations;
    auto n = gen.uniform(0, 150);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<CtsUrn> targets;
      auto t = gen.uniform(1, 3);
      for (std::size_t k = 0; k < t; ++k) {
        targets.push_back(random_passage_urn(gen, gen.chance(0.1) ? other : version, refs, counts, 0.05));
      }
      auto kind = kAllAnnotationKinds[gen.uniform(0, 8)];
      annotations.push_back(Annotation{kind, "urn:cite2:t:a.v:" + std::to_string(i), targets, AudioAnnotation{}});
    }
    catalog = catalog.with_annotations(std::move(annotations));
    for (int q = 0; q < 60; ++q) {
      auto query = random_passage_urn(gen, version, refs, counts, 0.0);
      std::optional<AnnotationKind> kind;
      if (gen.chance(0.3)) kind = kAllAnnotationKinds[gen.uniform(0, 8)];
      std::vector<std::pair<AnnotationKind, std::string>> actual;
      try {
        for (const auto& a : annotations_overlapping(query, kind, catalog)) actual.emplace_back(a->kind, a->record_urn);
      } catch (const Error& e) {
        ASSERT_EQ(e.code(), ErrorCode::InvertedRange) << query.str();
        continue;
      }
      ASSERT_EQ(actual, oracle_overlapping(catalog, query, kind)) << query.str();
    }
  }
}

// --- persistence ----------------------------------------------------------------------

TEST(Persistence, RoundTrip) {
  TempDir dir;
  auto catalog = fixture_catalog();
  save_catalog(catalog, dir.path);
  auto loaded = load_catalog(dir.path);
  ASSERT_EQ(loaded.versions().size(), catalog.versions().size());
  for (std::size_t i = 0; i < catalog.versions().size(); ++i) {
    EXPECT_EQ(loaded.versions()[i]->metadata, catalog.versions()[i]->metadata);
    EXPECT_EQ(loaded.versions()[i]->text.rows(), catalog.versions()[i]->text.rows());
  }
  ASSERT_EQ(loaded.annotations().size(), catalog.annotations().size());
  for (std::size_t i = 0; i < catalog.annotations().size(); ++i) {
    EXPECT_EQ(envelope(*loaded.annotations()[i]), envelope(*catalog.annotations()[i]));
  }
  EXPECT_EQ(aggregate_attributions(loaded), aggregate_attributions(catalog));
}

TEST(Persistence, FailedIngestLeavesDataUntouched) {
  TempDir dir;
  auto catalog = fixture_catalog();
  save_catalog(catalog, dir.path);
  auto snapshot = current_snapshot(dir.path);
  EXPECT_THROW(ingest(load_catalog(dir.path), "alignment", "[{\"urn\": 3}]", {}), Error);
  EXPECT_EQ(current_snapshot(dir.path), snapshot);
  EXPECT_TRUE(load_catalog(std::filesystem::temp_directory_path() / "atlas-no-such-dir").versions().empty());
}

TEST(SnapshotStore, ReadersKeepTheirSnapshot) {
  SnapshotStore store;
  auto reader = store.current();
  store.update([](const Catalog& c) {
    return c.register_version({urn(kIliadGrc), "grc", "", {}}, read_text_tsv(fixture("iliad-grc.tsv")));
  });
  EXPECT_TRUE(reader->versions().empty());
  EXPECT_EQ(store.current()->versions().size(), 1u);
}
