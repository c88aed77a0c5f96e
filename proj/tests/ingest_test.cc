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

#include "consent_audit/ingest.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <string>
#include <unordered_set>

#include "consent_audit/sample.h"
#include "consent_audit/synthetic.h"
#include "test_util.h"

namespace consent_audit {
namespace {

using testing::ScratchDir;
using testing::WriteFile;

struct Drained {
  std::vector<Sample> samples;
  std::vector<Rejection> rejections;
  std::vector<std::string> order;  // uid or "!<line>" in yield order
  StreamStats stats;
};

Drained Drain(SampleReader& reader) {
  Drained d;
  while (auto outcome = reader.Next()) {
    if (auto* s = std::get_if<Sample>(&*outcome)) {
      d.order.push_back(s->uid);
      d.samples.push_back(std::move(*s));
    } else {
      auto& r = std::get<Rejection>(*outcome);
      d.order.push_back("!" + std::to_string(r.line_no));
      d.rejections.push_back(std::move(r));
    }
  }
  d.stats = reader.stats();
  return d;
}

Drained DrainText(const std::string& text, InputFormat format = InputFormat::kNdRecords,
                  SampleReader::Options options = {}) {
  std::istringstream in(text);
  auto reader = SampleReader::FromStream(in, format, options);
  EXPECT_TRUE(reader.ok());
  return Drain(**reader);
}

TEST(SampleReaderTest, ThreeWellFormedLines) {
  Drained d = DrainText(
      "{\"uid\":\"a\",\"url\":\"https://a.com/1.jpg\",\"caption\":\"x\"}\n"
      "{\"uid\":\"b\",\"url\":\"https://b.com/2.jpg\",\"caption\":\"\"}\n"
      "{\"uid\":\"c\",\"url\":\"https://c.com/3.jpg\"}\n");
  EXPECT_EQ(d.samples.size(), 3u);
  EXPECT_EQ(d.stats.total_records, 3u);
  EXPECT_EQ(d.stats.valid, 3u);
  EXPECT_EQ(d.stats.rejected_total(), 0u);
}

TEST(SampleReaderTest, MalformedLineIsIsolated) {
  Drained d = DrainText(
      "{\"uid\":\"a\",\"url\":\"https://a.com/1.jpg\"}\n"
      "{\"uid\":\"b\",\"url\":\n"
      "{\"uid\":\"c\",\"url\":\"https://c.com/3.jpg\"}\n"
      "{\"uid\":\"d\",\"url\":\"https://d.com/4.jpg\"}\n");
  ASSERT_EQ(d.samples.size(), 3u);
  ASSERT_EQ(d.rejections.size(), 1u);
  EXPECT_EQ(d.rejections[0].line_no, 2u);
  EXPECT_EQ(d.rejections[0].error.code, ErrorCode::kMalformedLine);
  EXPECT_EQ(d.order, (std::vector<std::string>{"a", "!2", "c", "d"}));
  EXPECT_EQ(d.stats.valid + d.stats.rejected_total(), d.stats.total_records);
  EXPECT_EQ(d.stats.rejected.at(ErrorCode::kMalformedLine), 1u);
}

TEST(SampleReaderTest, ValidationErrorsCountByKind) {
  Drained d = DrainText(
      "{\"uid\":\"a\"}\n"
      "{\"uid\":\"b\",\"url\":\"nope\"}\n"
      "[1,2]\n"
      "{\"uid\":\"c\",\"url\":\"https://c.com/\",\"caption\":7}\n");
  EXPECT_EQ(d.stats.total_records, 4u);
  EXPECT_EQ(d.stats.valid, 0u);
  EXPECT_EQ(d.stats.rejected.at(ErrorCode::kMissingField), 1u);
  EXPECT_EQ(d.stats.rejected.at(ErrorCode::kInvalidUrl), 1u);
  EXPECT_EQ(d.stats.rejected.at(ErrorCode::kMalformedLine), 1u);
  EXPECT_EQ(d.stats.rejected.at(ErrorCode::kInvalidField), 1u);
}

TEST(SampleReaderTest, BlankLinesAndCrlfAreSkippedButCounted) {
  Drained d = DrainText(
      "\r\n{\"uid\":\"a\",\"url\":\"https://a.com/\"}\r\n   \n"
      "{\"uid\":\"b\",\"url\":\"https://b.com/\"}");
  EXPECT_EQ(d.stats.total_records, 2u);
  EXPECT_EQ(d.stats.valid, 2u);
  // Physical line numbers survive skipped lines.
  Drained e = DrainText("\n\nnot json\n");
  ASSERT_EQ(e.rejections.size(), 1u);
  EXPECT_EQ(e.rejections[0].line_no, 3u);
}

TEST(SampleReaderTest, DuplicateUidRejectedNotDropped) {
  Drained d = DrainText(
      "{\"uid\":\"a\",\"url\":\"https://a.com/1\"}\n"
      "{\"uid\":\"a\",\"url\":\"https://a.com/2\"}\n"
      "{\"uid\":\"b\",\"url\":\"https://a.com/3\"}\n");
  EXPECT_EQ(d.samples.size(), 2u);
  ASSERT_EQ(d.rejections.size(), 1u);
  EXPECT_EQ(d.rejections[0].error.code, ErrorCode::kDuplicateUid);
  EXPECT_EQ(d.rejections[0].line_no, 2u);

  Drained lax = DrainText(
      "{\"uid\":\"a\",\"url\":\"https://a.com/1\"}\n"
      "{\"uid\":\"a\",\"url\":\"https://a.com/2\"}\n",
      InputFormat::kNdRecords, {.reject_duplicate_uids = false});
  EXPECT_EQ(lax.samples.size(), 2u);
}

TEST(SampleReaderTest, CsvInput) {
  Drained d = DrainText(
      "uid,url,caption,ocr_text,metadata\n"
      "a,https://a.com/1.jpg,\"hello, world\",,\n"
      "b,https://b.com/2.jpg,\"multi\nline\",sign text,\"{\"\"Copyright\"\":\"\"Me\"\"}\"\n"
      "c,,x,,\n"
      "d,https://d.com/,too,many,fields,here\n",
      InputFormat::kCsv);
  ASSERT_EQ(d.samples.size(), 2u);
  EXPECT_EQ(d.samples[0].caption, "hello, world");
  EXPECT_FALSE(d.samples[0].ocr_text.has_value());
  EXPECT_FALSE(d.samples[0].metadata.has_value());
  EXPECT_EQ(d.samples[1].caption, "multi\nline");
  EXPECT_EQ(d.samples[1].ocr_text, "sign text");
  EXPECT_EQ(d.samples[1].metadata->at("Copyright"), "Me");
  ASSERT_EQ(d.rejections.size(), 2u);
  EXPECT_EQ(d.rejections[0].error.code, ErrorCode::kMissingField);
  EXPECT_EQ(d.rejections[1].error.code, ErrorCode::kMalformedLine);
  EXPECT_EQ(d.rejections[1].line_no, 6u);
}

TEST(SampleReaderTest, CsvWithoutHeaderFailsToOpen) {
  std::istringstream in("");
  auto reader = SampleReader::FromStream(in, InputFormat::kCsv, {});
  ASSERT_FALSE(reader.ok());
  EXPECT_EQ(reader.error().code, ErrorCode::kMalformedLine);
}

TEST(SampleReaderTest, MissingFileIsIoError) {
  auto reader = SampleReader::Open("/nonexistent/records.jsonl", InputFormat::kNdRecords);
  ASSERT_FALSE(reader.ok());
  EXPECT_EQ(reader.error().code, ErrorCode::kIoError);
}

TEST(SampleReaderTest, OrderPreservedAndRestartable) {
  ScratchDir dir;
  CorpusSpec spec = ScaledSpec(3000, 11);
  std::ostringstream corpus;
  WriteCorpus(spec, corpus);
  // Sprinkle in dirt so rejections take part in the ordering check.
  std::string text = corpus.str();
  text.insert(text.find('\n', text.size() / 2) + 1, "garbage\n");
  WriteFile(dir / "c.jsonl", text);

  std::vector<std::string> expected;
  {
    std::istringstream lines(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(lines, line)) {
      ++n;
      auto j = nlohmann::json::parse(line, nullptr, false);
      expected.push_back(j.is_discarded() ? "!" + std::to_string(n) : j["uid"].get<std::string>());
    }
  }

  auto first = SampleReader::Open(dir / "c.jsonl", InputFormat::kNdRecords);
  auto second = SampleReader::Open(dir / "c.jsonl", InputFormat::kNdRecords);
  ASSERT_TRUE(first.ok() && second.ok());
  Drained a = Drain(**first);
  Drained b = Drain(**second);
  EXPECT_EQ(a.order, expected);
  EXPECT_EQ(a.stats, b.stats);
  EXPECT_EQ(a.stats.total_records, 3001u);
  EXPECT_EQ(a.stats.valid, 3000u);
}

TEST(SampleReaderTest, GeneratorCountMatchesStats) {
  std::stringstream corpus;
  CorpusTruth truth = WriteCorpus(ScaledSpec(20000, 5), corpus);
  auto reader = SampleReader::FromStream(corpus, InputFormat::kNdRecords, {});
  ASSERT_TRUE(reader.ok());
  Drained d = Drain(**reader);
  EXPECT_EQ(d.stats.total_records, truth.samples);
  EXPECT_EQ(d.stats.valid, truth.samples);
}

TEST(UidIndexTest, AgreesWithHashSet) {
  std::mt19937_64 rng(3);
  UidIndex index;
  std::unordered_set<std::string> oracle;
  for (int i = 0; i < 200000; ++i) {
    // Small alphabet so repeats are common.
    std::string uid = std::to_string(rng() % 150000);
    bool fresh = oracle.insert(uid).second;
    ASSERT_EQ(index.Insert(uid), fresh) << uid;
  }
  EXPECT_EQ(index.size(), oracle.size());
}

TEST(UidIndexTest, EmptyAndLongUids) {
  UidIndex index;
  EXPECT_TRUE(index.Insert(""));
  EXPECT_FALSE(index.Insert(""));
  std::string long_uid(10000, 'x');
  EXPECT_TRUE(index.Insert(long_uid));
  long_uid.back() = 'y';
  EXPECT_TRUE(index.Insert(long_uid));
  EXPECT_EQ(index.size(), 3u);
}

TEST(InputFormatTest, Parse) {
  EXPECT_EQ(ParseInputFormat("ndrecords"), InputFormat::kNdRecords);
  EXPECT_EQ(ParseInputFormat("csv"), InputFormat::kCsv);
  EXPECT_FALSE(ParseInputFormat("parquet").has_value());
}

}  // namespace
}  // namespace consent_audit
