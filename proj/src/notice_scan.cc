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

#include <fmt/format.h>
#include <unicode/bytestream.h>
#include <unicode/normalizer2.h>

#include <algorithm>
#include <boost/regex.hpp>
#include <fstream>
#include <sstream>

#include "consent_audit/strings.h"

namespace consent_audit {

struct PatternSet::Compiled {
  struct Entry {
    MatchCategory category;
    boost::regex regex;
  };
  std::vector<PatternCategory> categories;
  std::vector<Entry> entries;
  bool case_sensitive = false;
};

namespace {

std::vector<PatternCategory> BuiltinPatterns() {
  return {
      {MatchCategory::kCopyrightGeneral,
       {
           // "copyright" with a year or a name token starting within 40 chars.
           R"(\bcopyright\b[^\r\n]{0,40}?(?:\b\d{4}\b|\b[a-z][a-z0-9&'-]+))",
           R"(\bcopr\.)",
           R"(\ball\s+rights\s+reserved\b)",
       }},
      {MatchCategory::kCopyrightSymbol,
       {
           "\xC2\xA9",  // U+00A9
           R"(&copy;)",
           // "(c)" alone is too noisy; require an adjacent year.
           R"(\(c\)\s?\d{4}\b|\b\d{4}\s?\(c\))",
       }},
      {MatchCategory::kCreativeCommons,
       {
           R"(\bcreative\s+commons\b)",
           R"(\bCC[- ]BY(?:-(?:NC-SA|NC-ND|SA|ND|NC))?(?:[- ](?:[1-4]\.0|2\.5))?\b)",
           R"(\bCC0\b)",
       }},
  };
}

bool IsTextCategory(MatchCategory category) {
  return category == MatchCategory::kCopyrightGeneral ||
         category == MatchCategory::kCopyrightSymbol || category == MatchCategory::kCreativeCommons;
}

bool IsAscii(std::string_view text) {
  return std::all_of(text.begin(), text.end(),
                     [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

}  // namespace

PatternSet::PatternSet(std::shared_ptr<const Compiled> compiled) : compiled_(std::move(compiled)) {}

Result<PatternSet> PatternSet::Compile(std::vector<PatternCategory> categories,
                                       bool case_sensitive) {
  auto compiled = std::make_shared<Compiled>();
  compiled->case_sensitive = case_sensitive;
  auto flags = boost::regex::perl | boost::regex::no_mod_m;
  if (!case_sensitive) flags |= boost::regex::icase;
  for (const auto& category : categories) {
    if (!IsTextCategory(category.category)) {
      return MakeError(
          ErrorCode::kInvalidPattern,
          fmt::format("{} is not a text category", MatchCategoryName(category.category)));
    }
    if (category.patterns.empty()) {
      return MakeError(
          ErrorCode::kInvalidPattern,
          fmt::format("category {} has no patterns", MatchCategoryName(category.category)));
    }
    for (const auto& pattern : category.patterns) {
      try {
        compiled->entries.push_back({category.category, boost::regex(pattern, flags)});
      } catch (const boost::regex_error& e) {
        return MakeError(ErrorCode::kInvalidPattern, fmt::format("'{}': {}", pattern, e.what()));
      }
    }
  }
  compiled->categories = std::move(categories);
  return PatternSet(std::move(compiled));
}

Result<PatternSet> PatternSet::Parse(std::string_view text) {
  std::vector<PatternCategory> categories;
  bool case_sensitive = false;
  std::size_t current = 0;
  std::size_t line_no = 0;
  for (std::string_view raw : SplitView(text, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    std::string_view line = TrimAscii(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line == "!case-sensitive") {
      case_sensitive = true;
      continue;
    }
    if (line.front() == '[' && line.back() == ']') {
      std::string_view name = line.substr(1, line.size() - 2);
      auto category = ParseMatchCategory(name);
      if (!category || !IsTextCategory(*category)) {
        return MakeError(ErrorCode::kInvalidPattern,
                         fmt::format("line {}: unknown category '{}'", line_no, name));
      }
      auto existing = std::find_if(categories.begin(), categories.end(),
                                   [&](const auto& c) { return c.category == *category; });
      if (existing == categories.end()) {
        categories.push_back({*category, {}});
        existing = categories.end() - 1;
      }
      current = static_cast<std::size_t>(existing - categories.begin());
      continue;
    }
    if (categories.empty()) {
      return MakeError(ErrorCode::kInvalidPattern,
                       fmt::format("line {}: pattern before any [Category] header", line_no));
    }
    categories[current].patterns.emplace_back(line);
  }
  if (categories.empty()) return MakeError(ErrorCode::kInvalidPattern, "no patterns");
  return Compile(std::move(categories), case_sensitive);
}

Result<PatternSet> PatternSet::LoadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return MakeError(ErrorCode::kIoError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

const std::vector<PatternCategory>& PatternSet::categories() const { return compiled_->categories; }

bool PatternSet::case_sensitive() const { return compiled_->case_sensitive; }

Result<PatternSet> PatternSet::WithPattern(MatchCategory category, std::string pattern) const {
  std::vector<PatternCategory> categories = compiled_->categories;
  auto it = std::find_if(categories.begin(), categories.end(),
                         [&](const auto& c) { return c.category == category; });
  if (it == categories.end()) {
    categories.push_back({category, {std::move(pattern)}});
  } else {
    it->patterns.push_back(std::move(pattern));
  }
  return Compile(std::move(categories), compiled_->case_sensitive);
}

std::vector<NoticeMatch> PatternSet::Scan(std::string_view text) const {
  std::vector<NoticeMatch> matches;
  for (const auto& entry : compiled_->entries) {
    boost::cregex_iterator it(text.data(), text.data() + text.size(), entry.regex);
    for (; it != boost::cregex_iterator(); ++it) {
      const auto& m = (*it)[0];
      if (m.length() == 0) continue;
      auto begin = static_cast<std::size_t>(m.first - text.data());
      auto end = static_cast<std::size_t>(m.second - text.data());
      matches.push_back({entry.category, begin, end, std::string(text.substr(begin, end - begin))});
    }
  }
  std::stable_sort(matches.begin(), matches.end(),
                   [](const NoticeMatch& a, const NoticeMatch& b) { return a.begin < b.begin; });
  return matches;
}

const PatternSet& DefaultPatternSet() {
  static const PatternSet* const kDefault = [] {
    auto set = PatternSet::Compile(BuiltinPatterns());
    assert(set.ok());
    return new PatternSet(std::move(set).value());
  }();
  return *kDefault;
}

std::string NormalizeNfc(std::string_view text) {
  if (IsAscii(text)) return std::string(text);
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) return std::string(text);
  icu::StringPiece piece(text.data(), static_cast<int32_t>(text.size()));
  if (nfc->isNormalizedUTF8(piece, status) && U_SUCCESS(status)) return std::string(text);
  status = U_ZERO_ERROR;
  std::string out;
  icu::StringByteSink<std::string> sink(&out);
  nfc->normalizeUTF8(0, piece, sink, nullptr, status);
  if (U_FAILURE(status)) return std::string(text);
  return out;
}

std::vector<NoticeMatch> ScanText(std::string_view text, const PatternSet& patterns) {
  if (text.empty()) return {};
  if (IsAscii(text)) return patterns.Scan(text);
  return patterns.Scan(NormalizeNfc(text));
}

ConsentFlags ScanSampleText(const Sample& sample, const PatternSet& patterns) {
  ConsentFlags flags;
  auto add = [&](Channel channel, std::string_view text) {
    bool hit = false;
    for (auto& m : ScanText(text, patterns)) {
      flags.matches.push_back({channel, m.category, std::move(m.text), m.begin, m.end, {}});
      hit = true;
    }
    return hit;
  };
  flags.caption_hit = add(Channel::kCaption, sample.caption);
  if (sample.ocr_text) flags.ocr_hit = add(Channel::kOcr, *sample.ocr_text);
  return flags;
}

}  // namespace consent_audit
