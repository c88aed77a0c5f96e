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

// Public suffix rule table (publicsuffix.org format) and registrable-domain
// lookup. The bundled snapshot lives in data/public_suffix_list.dat.

#ifndef CONSENT_AUDIT_PUBLIC_SUFFIX_H_
#define CONSENT_AUDIT_PUBLIC_SUFFIX_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>

#include "consent_audit/result.h"

namespace consent_audit {

enum class SuffixSections {
  kIcannOnly,        // the registry-operated section
  kIcannAndPrivate,  // also vendor-submitted suffixes (blogspot.com, ...)
};

class SuffixRules {
 public:
  static Result<SuffixRules> Parse(std::string_view text, SuffixSections sections);
  static Result<SuffixRules> LoadFile(const std::filesystem::path& path, SuffixSections sections);
  // The bundled snapshot, ICANN section.
  static Result<SuffixRules> LoadDefault();
  // No table: the public suffix is always the last label, so the
  // registrable domain is the last two labels.
  static SuffixRules LastTwoLabels();

  // Public suffix of a lowercase ASCII hostname. Unlisted TLDs fall back to
  // the implicit "*" rule.
  std::string_view PublicSuffix(std::string_view host) const;

  // Snapshot identifier from the file's "VERSION:" comment, if any.
  const std::string& version() const { return version_; }
  std::size_t rule_count() const { return exact_.size() + wildcard_.size() + exception_.size(); }

 private:
  std::unordered_set<std::string> exact_;
  std::unordered_set<std::string> wildcard_;   // "*.ck" stored as "ck"
  std::unordered_set<std::string> exception_;  // "!www.ck" stored as "www.ck"
  std::string version_;
  bool last_two_labels_ = false;
};

std::filesystem::path DefaultSuffixListPath();

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_PUBLIC_SUFFIX_H_
