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

#include "consent_audit/notice_scan.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <string>
#include <tuple>

#include "consent_audit/exif.h"
#include "consent_audit/strings.h"
#include "consent_audit/synthetic.h"
#include "notice_oracles.h"
#include "test_util.h"

namespace consent_audit {
namespace {

using testing::Categories;
using testing::LoadLabeledCorpus;

using Span = std::tuple<MatchCategory, std::size_t, std::size_t>;

std::multiset<Span> Spans(const std::vector<NoticeMatch>& matches) {
  std::multiset<Span> out;
  for (const auto& m : matches) out.emplace(m.category, m.begin, m.end);
  return out;
}

// Reference engine: std::regex (ECMAScript) run pattern by pattern over the
// NFC text. Shares nothing with the scanner except the pattern strings.
std::multiset<Span> OracleSpans(const std::string& text, const PatternSet& set) {
  std::string nfc = NormalizeNfc(text);
  std::multiset<Span> out;
  auto flags = std::regex::ECMAScript;
  if (!set.case_sensitive()) flags |= std::regex::icase;
  for (const auto& category : set.categories()) {
    for (const auto& pattern : category.patterns) {
      std::regex re(pattern, flags);
      for (auto it = std::sregex_iterator(nfc.begin(), nfc.end(), re); it != std::sregex_iterator();
           ++it) {
        if (it->length(0) == 0) continue;
        auto begin = static_cast<std::size_t>(it->position(0));
        out.emplace(category.category, begin, begin + static_cast<std::size_t>(it->length(0)));
      }
    }
  }
  return out;
}

TEST(LabeledCorpusTest, HundredPercentAgreementWithLabels) {
  auto corpus = LoadLabeledCorpus();
  ASSERT_EQ(corpus.size(), 200u);
  int agree = 0;
  for (const auto& row : corpus) {
    auto got = Categories(ScanText(row.text, DefaultPatternSet()));
    if (got == row.labels) {
      ++agree;
    } else {
      ADD_FAILURE() << "mislabeled: '" << row.text << "'";
    }
  }
  EXPECT_EQ(agree, 200);
}

TEST(LabeledCorpusTest, EqualsReferenceEngine) {
  for (const auto& row : LoadLabeledCorpus()) {
    EXPECT_EQ(Spans(ScanText(row.text, DefaultPatternSet())),
              OracleSpans(row.text, DefaultPatternSet()))
        << row.text;
  }
}

std::string RandomNoticeish(std::mt19937_64& rng) {
  static const std::vector<std::string> kTokens = {
      "copyright", "Copyright", "copr.",    "copper", "©", "(c)", "(C)", "2019", "1999", "all",
      "rights",    "reserved",  "CC",       "BY",     "-", "NC",  "SA",  "ND",   "4.0",  "2.5",
      "CC0",       "creative",  "commons",  "&copy;", " ", " ",   " ",   "Jane", "x",    ",",
      ".",         "\n",        "e\xCC\x81"};
  std::uniform_int_distribution<std::size_t> pick(0, kTokens.size() - 1);
  std::string s;
  for (int n = static_cast<int>(rng() % 12); n > 0; --n) {
    s += kTokens[pick(rng)];
    if (rng() % 3) s += ' ';
  }
  return s;
}

TEST(ScanTextTest, RandomCorpusEqualsReferenceEngine) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 1000; ++i) {
    std::string text = RandomNoticeish(rng);
    ASSERT_EQ(Spans(ScanText(text, DefaultPatternSet())), OracleSpans(text, DefaultPatternSet()))
        << text;
  }
}

TEST(ScanTextTest, SpecExamples) {
  auto doe = ScanText("© John Doe 2025", DefaultPatternSet());
  ASSERT_EQ(doe.size(), 1u);
  EXPECT_EQ(doe[0].category, MatchCategory::kCopyrightSymbol);
  EXPECT_EQ(doe[0].text, "©");

  EXPECT_TRUE(ScanText("", DefaultPatternSet()).empty());
  EXPECT_TRUE(ScanText("copper wire copra", DefaultPatternSet()).empty());

  auto cc = ScanText("licensed CC BY-NC 4.0", DefaultPatternSet());
  ASSERT_EQ(cc.size(), 1u);
  EXPECT_EQ(cc[0].category, MatchCategory::kCreativeCommons);
  EXPECT_EQ(cc[0].text, "CC BY-NC 4.0");
}

TEST(ScanTextTest, SpanIsSourceSubstringOrderedByStart) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    std::string text = RandomNoticeish(rng);
    std::string nfc = NormalizeNfc(text);
    auto matches = ScanText(text, DefaultPatternSet());
    for (std::size_t j = 0; j < matches.size(); ++j) {
      ASSERT_LE(matches[j].end, nfc.size());
      EXPECT_EQ(nfc.substr(matches[j].begin, matches[j].end - matches[j].begin), matches[j].text);
      if (j > 0) {
        EXPECT_LE(matches[j - 1].begin, matches[j].begin);
      }
    }
  }
}

TEST(DefaultPatternSetTest, ContainsListedNoticesAndAllSixLicenses) {
  const PatternSet& set = DefaultPatternSet();
  EXPECT_EQ(&set, &DefaultPatternSet());
  EXPECT_EQ(Categories(ScanText("copr.", set)),
            std::set<MatchCategory>{MatchCategory::kCopyrightGeneral});
  for (const char* family : {"BY", "BY-SA", "BY-ND", "BY-NC", "BY-NC-SA", "BY-NC-ND"}) {
    for (const char* version : {"", " 1.0", " 2.0", " 2.5", " 3.0", " 4.0"}) {
      std::string text = std::string("CC ") + family + version;
      auto matches = ScanText(text, set);
      ASSERT_EQ(matches.size(), 1u) << text;
      EXPECT_EQ(matches[0].text, text);
    }
  }
}

TEST(ScanTextTest, CaseInsensitiveExceptSymbol) {
  EXPECT_FALSE(ScanText("COPR.", DefaultPatternSet()).empty());
  EXPECT_FALSE(ScanText("cc by-sa 4.0", DefaultPatternSet()).empty());
  EXPECT_FALSE(ScanText("ALL RIGHTS RESERVED", DefaultPatternSet()).empty());
}

TEST(ScanTextTest, DecomposedTextIsNormalizedFirst) {
  // "Dübois" with a combining diaeresis: NFC shrinks it by one byte, and
  // offsets refer to the composed form.
  std::string decomposed =
      "Du\xCC\x88"
      "bois \xC2\xA9 2021";
  std::string composed = NormalizeNfc(decomposed);
  EXPECT_EQ(composed,
            "D\xC3\xBC"
            "bois \xC2\xA9 2021");
  auto matches = ScanText(decomposed, DefaultPatternSet());
  ASSERT_EQ(matches.size(), 1u);
  EXPECT_EQ(matches[0].begin, composed.find("\xC2\xA9"));
  EXPECT_EQ(NormalizeNfc("plain ascii"), "plain ascii");
}

TEST(ScanTextTest, Deterministic) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    std::string text = RandomNoticeish(rng);
    EXPECT_EQ(ScanText(text, DefaultPatternSet()), ScanText(text, DefaultPatternSet()));
  }
}

TEST(PatternSetTest, AddingAPatternIsMonotone) {
  std::vector<std::pair<MatchCategory, std::string>> extras = {
      {MatchCategory::kCopyrightGeneral, R"(\bphoto\s+by\b)"},
      {MatchCategory::kCopyrightSymbol, R"(\(c\))"},
      {MatchCategory::kCreativeCommons, R"(\bpublic\s+domain\b)"},
      {MatchCategory::kCreativeCommons, "."},
  };
  std::mt19937_64 rng(21);
  std::vector<std::string> texts;
  for (const auto& row : LoadLabeledCorpus()) texts.push_back(row.text);
  for (int i = 0; i < 300; ++i) texts.push_back(RandomNoticeish(rng));
  for (const auto& [category, pattern] : extras) {
    auto bigger = DefaultPatternSet().WithPattern(category, pattern);
    ASSERT_TRUE(bigger.ok());
    for (const auto& text : texts) {
      auto before = Spans(ScanText(text, DefaultPatternSet()));
      auto after = Spans(ScanText(text, *bigger));
      EXPECT_TRUE(std::includes(after.begin(), after.end(), before.begin(), before.end()))
          << pattern << " on '" << text << "'";
    }
  }
}

TEST(PatternSetTest, ParseFile) {
  auto set = PatternSet::Parse(
      "# user set\n"
      "[CopyrightGeneral]\n"
      "\\bcopyright\\b\n"
      "\n"
      "[CreativeCommons]\r\n"
      "\\bcc0\\b\n"
      "[CopyrightGeneral]\n"
      "\\bcopr\\.\n");
  ASSERT_TRUE(set.ok()) << set.error().ToString();
  ASSERT_EQ(set->categories().size(), 2u);
  EXPECT_EQ(set->categories()[0].patterns.size(), 2u);
  EXPECT_FALSE(set->case_sensitive());
  EXPECT_EQ(
      Categories(ScanText("COPR. CC0", *set)),
      (std::set<MatchCategory>{MatchCategory::kCopyrightGeneral, MatchCategory::kCreativeCommons}));
  // The symbol category is absent from this set.
  EXPECT_TRUE(ScanText("\xC2\xA9 2020", *set).empty());
}

TEST(PatternSetTest, CaseSensitiveDirective) {
  auto set = PatternSet::Parse("!case-sensitive\n[CopyrightGeneral]\nCopyright\n");
  ASSERT_TRUE(set.ok());
  EXPECT_TRUE(set->case_sensitive());
  EXPECT_EQ(ScanText("Copyright", *set).size(), 1u);
  EXPECT_TRUE(ScanText("COPYRIGHT", *set).empty());
}

TEST(PatternSetTest, ParseErrors) {
  for (const char* text :
       {"", "# only comments\n", "copyright\n", "[Nope]\nx\n", "[ExifCopyright]\nx\n",
        "[CopyrightGeneral]\n(unclosed\n", "[CopyrightGeneral]\n"}) {
    auto set = PatternSet::Parse(text);
    ASSERT_FALSE(set.ok()) << text;
    EXPECT_EQ(set.error().code, ErrorCode::kInvalidPattern) << text;
  }
  auto missing = PatternSet::LoadFile("/nonexistent/patterns.txt");
  ASSERT_FALSE(missing.ok());
  EXPECT_EQ(missing.error().code, ErrorCode::kIoError);
}

TEST(ScanSampleTextTest, ChannelSeparation) {
  Sample a{"a", "https://x.com/", "copr. 1999", std::nullopt, {}, {}};
  ConsentFlags fa = ScanSampleText(a, DefaultPatternSet());
  EXPECT_TRUE(fa.caption_hit);
  EXPECT_FALSE(fa.ocr_hit);

  Sample b{"b", "https://x.com/", "hello", "\xC2\xA9 ACME", {}, {}};
  ConsentFlags fb = ScanSampleText(b, DefaultPatternSet());
  EXPECT_FALSE(fb.caption_hit);
  EXPECT_TRUE(fb.ocr_hit);
  ASSERT_EQ(fb.matches.size(), 1u);
  EXPECT_EQ(fb.matches[0].channel, Channel::kOcr);

  Sample c{"c", "https://x.com/", "\xC2\xA9 X", "\xC2\xA9 X", {}, {}};
  ConsentFlags fc = ScanSampleText(c, DefaultPatternSet());
  EXPECT_TRUE(fc.caption_hit && fc.ocr_hit);
  EXPECT_EQ(fc.matches.size(), 2u);
  EXPECT_FALSE(fc.exif_hit);  // text scan never sets EXIF
}

TEST(UnionTest, BruteForceOverSyntheticSamples) {
  CorpusSpec spec = ScaledSpec(1000, 4);
  // Dense plan so every overlap shape appears at this size.
  spec.plan = ChannelPlan{.caption_only = 40,
                          .ocr_only = 30,
                          .exif_only = 50,
                          .caption_ocr = 12,
                          .caption_exif = 9,
                          .ocr_exif = 7,
                          .all_three = 5};
  spec.raw_exif_rate = 0.3;
  CorpusTruth truth;
  std::vector<Sample> samples = GenerateCorpus(spec, &truth);
  ASSERT_EQ(samples.size(), 1000u);

  std::set<std::string> a, b, c;
  std::uint64_t any = 0;
  for (const auto& s : samples) {
    ConsentFlags flags = ScanSampleText(s, DefaultPatternSet());
    flags.exif_hit = FindExifCopyright(s).copyright.has_value();
    if (flags.caption_hit) a.insert(s.uid);
    if (flags.ocr_hit) b.insert(s.uid);
    if (flags.exif_hit) c.insert(s.uid);
    any += flags.any();
  }
  std::set<std::string> all = a;
  all.insert(b.begin(), b.end());
  all.insert(c.begin(), c.end());
  EXPECT_EQ(any, all.size());
  EXPECT_LE(all.size(), a.size() + b.size() + c.size());
  EXPECT_GE(all.size(), std::max({a.size(), b.size(), c.size()}));
  // Inclusion-exclusion as a second, arithmetic oracle.
  auto inter = [](const std::set<std::string>& x, const std::set<std::string>& y) {
    std::set<std::string> out;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::inserter(out, out.end()));
    return out;
  };
  auto ab = inter(a, b), ac = inter(a, c), bc = inter(b, c), abc = inter(ab, c);
  EXPECT_EQ(all.size(),
            a.size() + b.size() + c.size() - ab.size() - ac.size() - bc.size() + abc.size());
  EXPECT_EQ(a.size(), spec.plan.caption());
  EXPECT_EQ(b.size(), spec.plan.ocr());
  EXPECT_EQ(c.size(), spec.plan.exif());
  EXPECT_EQ(all.size(), spec.plan.any());
}

}  // namespace
}  // namespace consent_audit
