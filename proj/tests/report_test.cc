// Copyright 2026 The Consent Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "consent_audit/report.h"

#include <gtest/gtest.h>

#include <sstream>

#include "consent_audit/synthetic.h"
#include "test_util.h"

namespace consent_audit {
namespace {

using testing::DemoPath;
using testing::ReadFile;
using testing::ScratchDir;
using testing::WriteFile;

ScanOutcome ScanText(const std::string& text, int jobs, const SuffixRules* rules = nullptr) {
  std::istringstream in(text);
  auto reader = SampleReader::FromStream(in, InputFormat::kNdRecords, {});
  EXPECT_TRUE(reader.ok());
  ScanOptions options;
  options.jobs = jobs;
  options.suffix_rules = rules;
  options.batch_size = 64;
  return RunScan(**reader, DefaultPatternSet(), options);
}

// Drops provenance lines, which carry digests and versions.
std::string StripProvenance(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.starts_with("# consent-audit") || line.starts_with("# input") ||
        line.starts_with("# cache snapshot")) {
      continue;
    }
    out += line + "\n";
  }
  return out;
}

TEST(TableThreeTest, GeneratedCorpusMatchesTruth) {
  std::ostringstream corpus;
  CorpusTruth truth = WriteCorpus(TableThreeSpec(3), corpus);
  ASSERT_EQ(truth.samples, 10'000u);
  ASSERT_EQ(truth.caption, 22u);
  ASSERT_EQ(truth.ocr, 9u);
  ASSERT_EQ(truth.exif, 227u);
  for (int jobs : {1, 4}) {
    ScanOutcome scan = ScanText(corpus.str(), jobs);
    EXPECT_EQ(scan.counts.processed, truth.samples);
    EXPECT_EQ(scan.counts.caption, truth.caption);
    EXPECT_EQ(scan.counts.ocr, truth.ocr);
    EXPECT_EQ(scan.counts.exif, truth.exif);
    EXPECT_EQ(scan.counts.any, truth.any);
    EXPECT_EQ(scan.stats.rejected_total(), 0u);

    std::ostringstream md;
    WriteTableThreeMarkdown(md, scan.counts, ChooseDenominator(scan.counts, std::nullopt));
    EXPECT_NE(md.str().find("| Caption | 22 (0.22%) |"), std::string::npos) << md.str();
    EXPECT_NE(md.str().find("| OCR | 9 (0.09%) |"), std::string::npos);
    EXPECT_NE(md.str().find("| EXIF Metadata | 227 (2.27%) |"), std::string::npos);
    EXPECT_NE(md.str().find("% of 10,000 processed samples"), std::string::npos);
  }
}

TEST(TableThreeTest, UnionCountsEachSampleOnce) {
  std::string text =
      R"({"uid":"1","url":"https://a.com/1","caption":"© 2020 A","ocr_text":"(c) 2020 A"})"
      "\n"
      R"({"uid":"2","url":"https://a.com/2","caption":"Copyright 2019 B","metadata":{"Copyright":"B"}})"
      "\n"
      R"({"uid":"3","url":"https://a.com/3","caption":"plain"})"
      "\n";
  ScanOutcome scan = ScanText(text, 1);
  EXPECT_EQ(scan.counts.caption, 2u);
  EXPECT_EQ(scan.counts.ocr, 1u);
  EXPECT_EQ(scan.counts.exif, 1u);
  EXPECT_EQ(scan.counts.any, 2u);
  EXPECT_EQ(scan.counts.processed, 3u);
}

TEST(TableThreeTest, EmptyInputGivesZeroTable) {
  ScanOutcome scan = ScanText("", 2);
  EXPECT_EQ(scan.counts, ScanCounts{});
  std::ostringstream csv, md;
  Denominator denom = ChooseDenominator(scan.counts, std::nullopt);
  WriteTableThreeCsv(csv, scan.counts, denom);
  WriteTableThreeMarkdown(md, scan.counts, denom);
  EXPECT_EQ(csv.str(),
            "measure,count,denominator,denominator_kind,share\n"
            "Caption,0,0,processed,0\n"
            "OCR,0,0,processed,0\n"
            "EXIF Metadata,0,0,processed,0\n"
            "Caption \xE2\x88\xAA OCR \xE2\x88\xAA EXIF,0,0,processed,0\n");
  EXPECT_NE(md.str().find("| Caption | 0 (0.00%) |"), std::string::npos);
}

TEST(TableThreeTest, ReleasedDenominator) {
  ScanCounts counts;
  counts.processed = 100;
  counts.caption = 10;
  Denominator released = ChooseDenominator(counts, 1000);
  EXPECT_EQ(released.value, 1000u);
  EXPECT_EQ(released.label, "released");
  EXPECT_EQ(ChooseDenominator(counts, std::nullopt).label, "processed");
  std::ostringstream md;
  WriteTableThreeMarkdown(md, counts, released);
  EXPECT_NE(md.str().find("| Caption | 10 (1.00%) |"), std::string::npos) << md.str();
}

TEST(ScanTest, RejectionsArriveInOrderAndDomainsCount) {
  std::string text = R"({"uid":"1","url":"https://i.pinimg.com/1.jpg"})"
                     "\n"
                     "not json\n"
                     R"({"uid":"2","url":"https://s.pinimg.com/2.jpg"})"
                     "\n"
                     R"({"uid":"3"})"
                     "\n"
                     R"({"uid":"4","url":"https://x.co.uk/4.jpg"})"
                     "\n";
  auto rules = SuffixRules::LoadDefault();
  ASSERT_TRUE(rules.ok());
  std::istringstream in(text);
  auto reader = SampleReader::FromStream(in, InputFormat::kNdRecords, {});
  std::vector<std::size_t> lines;
  ScanOptions options;
  options.jobs = 3;
  options.suffix_rules = &*rules;
  ScanOutcome scan = RunScan(**reader, DefaultPatternSet(), options,
                             [&](const Rejection& r) { lines.push_back(r.line_no); });
  EXPECT_EQ(lines, (std::vector<std::size_t>{2, 4}));
  EXPECT_EQ(scan.counts.processed, 3u);
  EXPECT_EQ(scan.domains.base_counts().at("pinimg.com"), 2u);
  EXPECT_EQ(scan.domains.base_counts().at("x.co.uk"), 1u);
}

TEST(ScanCountsTest, MergeAdds) {
  ScanCounts a{10, 1, 2, 3, 4, 5};
  ScanCounts b{1, 1, 1, 1, 1, 1};
  a.Merge(b);
  EXPECT_EQ(a, (ScanCounts{11, 2, 3, 4, 5, 6}));
}

TEST(FormatCountTest, Groups) {
  EXPECT_EQ(FormatCount(0), "0");
  EXPECT_EQ(FormatCount(999), "999");
  EXPECT_EQ(FormatCount(1000), "1,000");
  EXPECT_EQ(FormatCount(1'126'876), "1,126,876");
  EXPECT_EQ(FormatCount(12'800'000'000ULL), "12,800,000,000");
}

TEST(ProvenanceTest, HeadersBothStyles) {
  ScratchDir dir;
  WriteFile(dir / "in.jsonl", "abc");
  Provenance p;
  ASSERT_FALSE(p.AddInput(dir / "in.jsonl"));
  p.cache_snapshot = "20261001T000000000Z";
  std::ostringstream hash, html;
  WriteProvenance(hash, p, CommentStyle::kHash);
  WriteProvenance(html, p, CommentStyle::kHtml);
  const std::string abc = "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad";
  EXPECT_EQ(hash.str(), "# consent-audit " CONSENT_AUDIT_VERSION "\n# input in.jsonl sha256=" +
                            abc + "\n# cache snapshot 20261001T000000000Z\n");
  EXPECT_NE(html.str().find("<!-- input in.jsonl sha256=" + abc + " -->"), std::string::npos);
  EXPECT_EQ(p.AddInput(dir / "missing")->code, ErrorCode::kIoError);
}

ObservationRow Row(std::string agent, bool ai, std::uint64_t all, std::uint64_t some,
                   std::uint64_t none) {
  ObservationRow row;
  row.agent = std::move(agent);
  row.ai_purpose = ai;
  row.all_disallowed = all;
  row.some_disallowed = some;
  row.none_disallowed = none;
  row.observed = all + some + none;
  return row;
}

TEST(TableFiveTest, HighlightAtThreshold) {
  ObservationTable table;
  table.all_agents = Row("All Agents", false, 900, 50, 50);
  table.rows = {Row("GPTBot", true, 931, 39, 30), Row("EdgeBot", false, 800, 100, 100),
                Row("JustUnder", false, 799, 101, 100), Row("Silent", false, 0, 0, 0)};
  std::ostringstream md, csv;
  WriteTableFiveMarkdown(md, table);
  WriteTableFiveCsv(csv, table);
  std::string text = md.str();
  EXPECT_NE(text.find("| **GPTBot (AI)** | 1,000 | 931 | 93.1% | 39 | 3.9% | 30 | 3.0% |"),
            std::string::npos)
      << text;
  EXPECT_NE(text.find("| **EdgeBot** |"), std::string::npos);
  EXPECT_NE(text.find("| JustUnder |"), std::string::npos);
  EXPECT_NE(text.find("| All Agents | 1,000 | 900 |"), std::string::npos);  // never bold
  EXPECT_NE(text.find("| Silent | 0 | 0 | 0.0% |"), std::string::npos);
  EXPECT_NE(csv.str().find("GPTBot,1,1,1000,931,0.93100000000000005,"), std::string::npos)
      << csv.str();
  EXPECT_NE(csv.str().find("JustUnder,0,0,"), std::string::npos);

  std::ostringstream strict;
  WriteTableFiveMarkdown(strict, table, TableFiveOptions{0.95});
  EXPECT_EQ(strict.str().find("**"), std::string::npos);
}

class PipelineTest : public ::testing::Test {
 protected:
  PipelineConfig DemoConfig() {
    auto config = LoadPipelineConfig(DemoPath("pipeline.json"));
    EXPECT_TRUE(config.ok()) << config.error().ToString();
    return *config;
  }
};

TEST_F(PipelineTest, DemoTableFiveIsHandDerived) {
  ScratchDir out;
  PipelineResult result = RunPipeline(DemoConfig(), out.path());
  EXPECT_EQ(result.exit_code, kExitOk);
  for (const auto& stage : result.stages) EXPECT_EQ(stage.status, "ok") << stage.name;
  EXPECT_EQ(StripProvenance(ReadFile(out / "table5.csv")),
            ReadFile(DemoPath("expected/table5.csv")));
  EXPECT_EQ(StripProvenance(ReadFile(out / "table3.csv")),
            ReadFile(DemoPath("expected/table3.csv")));
  EXPECT_NE(ReadFile(out / "table5.csv").find("# cache snapshot 20261001T000000000Z"),
            std::string::npos);
  EXPECT_EQ(ReadFile(out / "rejects.tsv"), "line\terror\tmessage\n11\tMalformedLine\tline 11\n");
  std::string metrics = ReadFile(out / "metrics.json");
  EXPECT_NE(metrics.find("\"tp\": 90"), std::string::npos);
  EXPECT_NE(metrics.find("\"fp\": 174"), std::string::npos);
}

TEST_F(PipelineTest, Deterministic) {
  ScratchDir a, b;
  PipelineConfig config = DemoConfig();
  RunPipeline(config, a.path());
  config.jobs = 4;
  RunPipeline(config, b.path());
  for (const char* name :
       {"domains.csv", "full_domains.csv", "table3.csv", "table3.md", "table5.csv", "table5.md",
        "tos_report.csv", "tos_report.md", "metrics.json", "rejects.tsv", "manifest.json"}) {
    EXPECT_EQ(ReadFile(a / name), ReadFile(b / name)) << name;
  }
}

TEST_F(PipelineTest, ConfigErrors) {
  auto base = DemoPath("");
  auto error = [&](const std::string& json) {
    auto config = ParsePipelineConfig(json, base);
    return config.ok() ? std::nullopt : std::optional<ErrorCode>(config.error().code);
  };
  EXPECT_EQ(error("[]"), ErrorCode::kConfigError);
  EXPECT_EQ(error("{"), ErrorCode::kConfigError);
  EXPECT_EQ(error(R"({"cache_dir":"cache"})"), ErrorCode::kConfigError);
  EXPECT_EQ(error(R"({"input":"records.jsonl","cache_dir":"cache","bogus":1})"),
            ErrorCode::kConfigError);
  EXPECT_EQ(error(R"({"input":"nope.jsonl","cache_dir":"cache"})"), ErrorCode::kConfigError);
  EXPECT_EQ(error(R"({"input":"records.jsonl"})"), ErrorCode::kConfigError);  // offline, no cache
  EXPECT_EQ(error(R"({"input":"records.jsonl","cache_dir":"cache","top_k":0})"),
            ErrorCode::kConfigError);
  EXPECT_EQ(error(R"({"input":"records.jsonl","cache_dir":"cache","jobs":-1})"),
            ErrorCode::kConfigError);
  EXPECT_EQ(error(R"({"input":"records.jsonl","cache_dir":"cache","ci_method":"exact"})"),
            ErrorCode::kConfigError);
  EXPECT_EQ(error(R"({"input":"records.jsonl","cache_dir":"cache","fetch":{"speed":1}})"),
            ErrorCode::kConfigError);
  EXPECT_EQ(error(R"({"input":"records.jsonl","cache_dir":"cache","offline":"yes"})"),
            ErrorCode::kConfigError);
  EXPECT_EQ(error(R"({"input":"records.jsonl","cache_dir":"cache","patterns":"none.txt"})"),
            ErrorCode::kConfigError);
  EXPECT_EQ(error(R"({"input":"records.jsonl","offline":false})"), std::nullopt);
}

TEST_F(PipelineTest, BadPatternFileIsUsageError) {
  ScratchDir dir;
  WriteFile(dir / "bad.patterns", "[CopyrightGeneral]\n(unclosed\n");
  PipelineConfig config = DemoConfig();
  config.patterns = (dir / "bad.patterns").string();
  PipelineResult result = RunPipeline(config, dir / "out");
  EXPECT_EQ(result.exit_code, kExitUsage);
  EXPECT_FALSE(std::filesystem::exists(dir / "out" / "table3.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "manifest.json"));
}

TEST_F(PipelineTest, FailedStageIsPartialFailure) {
  ScratchDir dir;
  WriteFile(dir / "tos.csv",
            "base_domain,category,license_type,scraping_policy\n"
            "absent.example,Other,Not Applicable,No AI\n");
  PipelineConfig config = DemoConfig();
  config.annotations = dir / "tos.csv";
  PipelineResult result = RunPipeline(config, dir / "out");
  EXPECT_EQ(result.exit_code, kExitPartialFailure);
  std::map<std::string, std::string> status;
  for (const auto& stage : result.stages) status[stage.name] = stage.status;
  EXPECT_EQ(status["scan"], "ok");
  EXPECT_EQ(status["robots"], "ok");
  EXPECT_EQ(status["tos"], "failed");
  EXPECT_EQ(status["metrics"], "ok");
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "table5.csv"));
}

TEST_F(PipelineTest, CliExitCodes) {
  ScratchDir dir;
  auto ok = testing::RunCli({"pipeline", "--config", DemoPath("pipeline.json").string(),
                             "--out-dir", (dir / "out").string()});
  EXPECT_EQ(ok.exit_code, kExitOk);
  WriteFile(dir / "bad.json", R"({"input": 3})");
  auto bad = testing::RunCli(
      {"pipeline", "--config", (dir / "bad.json").string(), "--out-dir", (dir / "out2").string()});
  EXPECT_EQ(bad.exit_code, kExitUsage);
  EXPECT_EQ(testing::RunCli({"metrics", "ci", "--k", "5"}).exit_code, kExitUsage);
}

TEST(ScoresTest, LoadScores) {
  ScratchDir dir;
  WriteFile(dir / "s.csv", "uid,score,label\na,0.9,1\nb,0.1,false\nc,0.5,true\n");
  auto table = LoadScores(dir / "s.csv");
  ASSERT_TRUE(table.ok());
  EXPECT_EQ(table->uids, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(table->labels, (std::vector<bool>{true, false, true}));
  WriteFile(dir / "bad.csv", "uid,score,label\na,x,1\n");
  EXPECT_FALSE(LoadScores(dir / "bad.csv").ok());
  WriteFile(dir / "bad2.csv", "uid,score,label\na,0.3,maybe\n");
  EXPECT_FALSE(LoadScores(dir / "bad2.csv").ok());
  EXPECT_FALSE(LoadScores(dir / "none.csv").ok());
}

}  // namespace
}  // namespace consent_audit
