#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

#include "atlas/persist.hpp"
#include "oracles.hpp"

using namespace atlas;
using namespace atlas::testing;

namespace {

struct CliRun {
  int status;
  std::string out;
};

// Runs the atlas binary with stderr folded into stdout.
CliRun atlas_cli(const std::string& args) {
  std::string command = std::string(ATLAS_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buffer[4096];
  while (auto n = fread(buffer, 1, sizeof buffer, pipe)) out.append(buffer, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("atlas-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  CliRun run(const std::string& args) { return atlas_cli("--data-dir " + dir_.string() + " " + args); }

  CliRun ingest_fixture(const std::string& kind, const std::string& name, const std::string& extra = "") {
    return run("ingest --kind " + kind + " --path " + fixture_path(name) + " " + extra);
  }

  void ingest_all() {
    ASSERT_EQ(ingest_fixture("text", "iliad-grc.tsv", std::string("--urn ") + kIliadGrc + " --lang grc").status, 0);
    ASSERT_EQ(ingest_fixture("text", "marlowe-eng.tsv", std::string("--urn ") + kMarlowe).status, 0);
    ASSERT_EQ(ingest_fixture("syntax-tree", "iliad-treebank.json").status, 0);
    ASSERT_EQ(ingest_fixture("attribution", "attributions.json").status, 0);
  }

  std::filesystem::path dir_;
};

}  // namespace

TEST_F(CliTest, IngestCounts) {
  auto audio = ingest_fixture("audio", "iliad-audio.tsv");
  EXPECT_EQ(audio.status, 0);
  EXPECT_EQ(audio.out, "ingested 5 records\n");
  auto tei = ingest_fixture("text", "thucydides-tei.xml");
  EXPECT_EQ(tei.status, 0) << tei.out;
  EXPECT_EQ(tei.out, "ingested 2 records\n");

  auto empty = dir_.parent_path() / "atlas-cli-empty.json";
  std::FILE* f = std::fopen(empty.c_str(), "w");
  std::fputs("[]", f);
  std::fclose(f);
  EXPECT_EQ(run("ingest --kind alignment --path " + empty.string()).out, "ingested 0 records\n");
  std::filesystem::remove(empty);
}

TEST_F(CliTest, IngestErrorsExitOne) {
  auto bad = dir_.parent_path() / "atlas-cli-bad.tsv";
  std::FILE* f = std::fopen(bad.c_str(), "w");
  std::fputs("1\t1.1\n", f);
  std::fclose(f);
  auto result = run("ingest --kind text --path " + bad.string() + " --urn " + kIliadGrc);
  std::filesystem::remove(bad);
  EXPECT_EQ(result.status, 1);
  EXPECT_NE(result.out.find("BadColumnCount at line 1"), std::string::npos) << result.out;
  EXPECT_FALSE(current_snapshot(dir_));
  EXPECT_EQ(run("ingest --kind bogus --path " + fixture_path("iliad-audio.tsv")).status, 1);
  EXPECT_EQ(run("ingest --kind text --path " + fixture_path("iliad-grc.tsv")).status, 1);
}

TEST_F(CliTest, ResolveMatchesTsv) {
  ingest_all();
  auto result = run(std::string("resolve ") + kIliadGrc + ":1.1-1.3");
  EXPECT_EQ(result.status, 0);
  auto rows = read_text_tsv(fixture("iliad-grc.tsv"));
  rows.resize(3);
  EXPECT_EQ(result.out, write_text_tsv(rows));
  auto bad = run("resolve urn:cts:x");
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.out.find("MalformedUrn"), std::string::npos);
  EXPECT_EQ(run(std::string("resolve ") + kIliadGrc + ":7.7").status, 1);
}

TEST_F(CliTest, AttributionReport) {
  ingest_all();
  auto result = run("report attributions");
  EXPECT_EQ(result.status, 0);
  std::string expected;
  for (const auto& row : aggregate_attributions(load_catalog(dir_))) {
    expected += row.role + "\t" + row.contributor + "\t" + format_count(row.count) + "\n";
  }
  EXPECT_EQ(result.out, expected);
  EXPECT_EQ(result.out.substr(0, result.out.find('\n')),
            "Annotator\tAlex Lessie, University of Pennsylvania, Philadelphia, PA, USA\t8");
}

TEST_F(CliTest, Validate) {
  ingest_all();
  auto lenient = run("validate");
  EXPECT_EQ(lenient.status, 0);
  auto strict = run("validate --strict");
  EXPECT_EQ(strict.status, 2);
  EXPECT_NE(strict.out.find("DanglingHead 79"), std::string::npos) << strict.out;
  EXPECT_NE(strict.out.find("UnmatchedCredit"), std::string::npos);
}

TEST_F(CliTest, ValidateCleanCatalog) {
  ASSERT_EQ(ingest_fixture("text", "iliad-grc.tsv", std::string("--urn ") + kIliadGrc).status, 0);
  ASSERT_EQ(ingest_fixture("audio", "iliad-audio.tsv").status, 0);
  auto strict = run("validate --strict");
  EXPECT_EQ(strict.status, 0) << strict.out;
}
