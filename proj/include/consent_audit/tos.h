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

// Terms-of-Service annotations: codebook enums, CSV loading and
// sample-weighted attribute distributions.

#ifndef CONSENT_AUDIT_TOS_H_
#define CONSENT_AUDIT_TOS_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "consent_audit/result.h"
#include "consent_audit/types.h"

namespace consent_audit {

enum class TosAttribute { kCategory, kLicenseType, kScrapingPolicy };

std::string_view TosAttributeName(TosAttribute attribute);  // "category", ...
std::optional<TosAttribute> ParseTosAttribute(std::string_view name);

// Codebook labels, e.g. "Content-sharing Community Platform".
std::string_view CodebookLabel(TosCategory value);
std::string_view CodebookLabel(LicenseType value);
std::string_view CodebookLabel(ScrapingPolicy value);

// Accepts the codebook label, the short schema label or the enum name,
// compared case-insensitively with punctuation and spacing ignored.
std::optional<TosCategory> ParseTosCategory(std::string_view text);
std::optional<LicenseType> ParseLicenseType(std::string_view text);
std::optional<ScrapingPolicy> ParseScrapingPolicy(std::string_view text);

// Codebook labels of every value of `attribute`, in codebook order.
std::vector<std::string_view> CodebookValues(TosAttribute attribute);
std::string_view CodebookLabel(const TosAnnotation& annotation, TosAttribute attribute);

// CSV with header base_domain,category,license_type,scraping_policy. Domains
// are lowercased. UnknownEnumValue and DuplicateDomain name the data row.
Result<std::map<std::string, TosAnnotation>> ReadAnnotations(std::istream& in);
Result<std::map<std::string, TosAnnotation>> LoadAnnotations(const std::filesystem::path& path);

struct TosShare {
  std::string_view value;  // codebook label
  std::uint64_t samples = 0;
  double share = 0.0;
};

// Share of each codebook value among the samples of annotated domains, every
// value listed in codebook order. MissingWeight when an annotated domain has
// no count.
Result<std::vector<TosShare>> WeightedDistribution(
    const std::map<std::string, TosAnnotation>& annotations,
    const std::map<std::string, std::uint64_t>& counts, TosAttribute attribute);

// tos_report.csv: attribute,value,samples,share (full precision).
void WriteTosCsv(std::ostream& out, TosAttribute attribute, const std::vector<TosShare>& shares);
// Markdown table, percentages to one decimal.
void WriteTosMarkdown(std::ostream& out, TosAttribute attribute,
                      const std::vector<TosShare>& shares);

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_TOS_H_
