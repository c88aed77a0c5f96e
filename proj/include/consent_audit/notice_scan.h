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

// Copyright-notice and license-declaration detection over free text
// (captions and OCR output).

#ifndef CONSENT_AUDIT_NOTICE_SCAN_H_
#define CONSENT_AUDIT_NOTICE_SCAN_H_

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "consent_audit/result.h"
#include "consent_audit/types.h"

namespace consent_audit {

struct PatternCategory {
  MatchCategory category;
  std::vector<std::string> patterns;  // Perl-syntax regular expressions
};

struct NoticeMatch {
  MatchCategory category;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string text;

  bool operator==(const NoticeMatch&) const = default;
};

// Compiled, immutable set of patterns. Copies share the compiled state, and
// concurrent scans against one set are safe.
class PatternSet {
 public:
  // InvalidPattern when a pattern fails to compile, a category is empty or
  // is not one of the three text categories.
  static Result<PatternSet> Compile(std::vector<PatternCategory> categories,
                                    bool case_sensitive = false);

  // Pattern file: "[CategoryName]" headers followed by one pattern per line.
  // Blank lines and lines starting with "#" are skipped; a line reading
  // "!case-sensitive" turns off case folding for the whole set.
  static Result<PatternSet> Parse(std::string_view text);
  static Result<PatternSet> LoadFile(const std::filesystem::path& path);

  const std::vector<PatternCategory>& categories() const;
  bool case_sensitive() const;

  // A new set with one extra pattern appended to `category`.
  Result<PatternSet> WithPattern(MatchCategory category, std::string pattern) const;

  std::vector<NoticeMatch> Scan(std::string_view text) const;

 private:
  struct Compiled;
  explicit PatternSet(std::shared_ptr<const Compiled> compiled);

  std::shared_ptr<const Compiled> compiled_;
};

// The built-in set. Same object on every call.
const PatternSet& DefaultPatternSet();

// Canonical composition (NFC). ASCII input is returned unchanged without
// touching ICU.
std::string NormalizeNfc(std::string_view text);

// Every non-overlapping leftmost match of every pattern, ordered by start
// offset (ties keep category/pattern order). Offsets index the NFC form of
// `text`.
std::vector<NoticeMatch> ScanText(std::string_view text, const PatternSet& patterns);

// Caption and OCR channels only; exif_hit is left false (see exif.h).
ConsentFlags ScanSampleText(const Sample& sample, const PatternSet& patterns);

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_NOTICE_SCAN_H_
