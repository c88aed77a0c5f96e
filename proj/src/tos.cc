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

#include "consent_audit/tos.h"

#include <fmt/format.h>

#include <array>
#include <fstream>

#include "consent_audit/csv.h"
#include "consent_audit/strings.h"

namespace consent_audit {
namespace {

template <typename E>
struct CodebookEntry {
  E value;
  std::string_view label;
  std::array<std::string_view, 3> aliases;
};

constexpr CodebookEntry<TosCategory> kCategories[] = {
    {TosCategory::kMarketplace, "Marketplace (E-commerce)", {"Marketplace", "E-commerce", ""}},
    {TosCategory::kCdnProvider, "CDN Provider", {"CDN", "CdnProvider", ""}},
    {TosCategory::kWebsiteHosting,
     "Website Hosting Service",
     {"Website Hosting", "WebsiteHosting", ""}},
    {TosCategory::kBlogService, "Blog Service", {"Blog", "BlogService", ""}},
    {TosCategory::kStockPhoto, "Stock Photo Platform", {"Stock Photo", "StockPhoto", ""}},
    {TosCategory::kContentSharingCommunity,
     "Content-sharing Community Platform",
     {"Content-sharing Community", "ContentSharingCommunity", ""}},
    {TosCategory::kOther, "Other", {"", "", ""}},
};

constexpr CodebookEntry<LicenseType> kLicenses[] = {
    {LicenseType::kPersonalNoncommercialResearch,
     "Personal/Noncommercial/Research Only",
     {"Personal/Noncommercial/Research", "Personal/Research/Non-commercial Only",
      "PersonalNoncommercialResearch"}},
    {LicenseType::kConditionalCommercial,
     "Conditional Commercial Access",
     {"Conditional Commercial", "ConditionalCommercial", ""}},
    {LicenseType::kOpenUnrestrictedCommercial,
     "Open or Unrestricted Commercial Use",
     {"Open/Unrestricted Commercial", "OpenUnrestrictedCommercial", ""}},
    {LicenseType::kNotApplicable, "Not Applicable", {"N/A", "NotApplicable", ""}},
};

constexpr CodebookEntry<ScrapingPolicy> kPolicies[] = {
    {ScrapingPolicy::kNoScrapingAndAI, "No scraping and AI", {"NoScrapingAndAI", "", ""}},
    {ScrapingPolicy::kNoScraping, "No scraping", {"NoScraping", "", ""}},
    {ScrapingPolicy::kNoAI, "No AI", {"NoAI", "", ""}},
    {ScrapingPolicy::kNoScrapingAndAIConditionally,
     "No scraping and AI conditionally",
     {"NoScrapingAndAIConditionally", "", ""}},
    {ScrapingPolicy::kNotMentioned, "Not Mentioned", {"NotMentioned", "", ""}},
};

// Lowercase alphanumerics only: "Content-sharing" == "contentsharing".
std::string Fold(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (IsAsciiAlnum(c)) out.push_back(AsciiToLower(c));
  }
  return out;
}

template <typename E, std::size_t N>
std::optional<E> ParseCodebook(const CodebookEntry<E> (&table)[N], std::string_view text) {
  std::string folded = Fold(text);
  if (folded.empty()) return std::nullopt;
  for (const auto& entry : table) {
    if (Fold(entry.label) == folded) return entry.value;
    for (std::string_view alias : entry.aliases) {
      if (!alias.empty() && Fold(alias) == folded) return entry.value;
    }
  }
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view LabelOf(const CodebookEntry<E> (&table)[N], E value) {
  for (const auto& entry : table) {
    if (entry.value == value) return entry.label;
  }
  return "";
}

template <typename E, std::size_t N>
std::vector<std::string_view> LabelsOf(const CodebookEntry<E> (&table)[N]) {
  std::vector<std::string_view> labels;
  for (const auto& entry : table) labels.push_back(entry.label);
  return labels;
}

}  // namespace

std::string_view TosAttributeName(TosAttribute attribute) {
  switch (attribute) {
    case TosAttribute::kCategory: return "category";
    case TosAttribute::kLicenseType: return "license_type";
    case TosAttribute::kScrapingPolicy: return "scraping_policy";
  }
  return "";
}

std::optional<TosAttribute> ParseTosAttribute(std::string_view name) {
  for (auto a :
       {TosAttribute::kCategory, TosAttribute::kLicenseType, TosAttribute::kScrapingPolicy}) {
    if (EqualsIgnoreAsciiCase(TosAttributeName(a), name)) return a;
  }
  return std::nullopt;
}

std::string_view CodebookLabel(TosCategory value) { return LabelOf(kCategories, value); }
std::string_view CodebookLabel(LicenseType value) { return LabelOf(kLicenses, value); }
std::string_view CodebookLabel(ScrapingPolicy value) { return LabelOf(kPolicies, value); }

std::optional<TosCategory> ParseTosCategory(std::string_view text) {
  return ParseCodebook(kCategories, text);
}
std::optional<LicenseType> ParseLicenseType(std::string_view text) {
  return ParseCodebook(kLicenses, text);
}
std::optional<ScrapingPolicy> ParseScrapingPolicy(std::string_view text) {
  return ParseCodebook(kPolicies, text);
}

std::vector<std::string_view> CodebookValues(TosAttribute attribute) {
  switch (attribute) {
    case TosAttribute::kCategory: return LabelsOf(kCategories);
    case TosAttribute::kLicenseType: return LabelsOf(kLicenses);
    case TosAttribute::kScrapingPolicy: return LabelsOf(kPolicies);
  }
  return {};
}

std::string_view CodebookLabel(const TosAnnotation& annotation, TosAttribute attribute) {
  switch (attribute) {
    case TosAttribute::kCategory: return CodebookLabel(annotation.category);
    case TosAttribute::kLicenseType: return CodebookLabel(annotation.license_type);
    case TosAttribute::kScrapingPolicy: return CodebookLabel(annotation.scraping_policy);
  }
  return "";
}

Result<std::map<std::string, TosAnnotation>> ReadAnnotations(std::istream& in) {
  CsvReader reader(in);
  if (auto header = reader.ReadHeader(); !header.ok()) return header.error();
  std::optional<std::size_t> columns[4];
  const char* names[4] = {"base_domain", "category", "license_type", "scraping_policy"};
  for (int i = 0; i < 4; ++i) {
    columns[i] = reader.Column(names[i]);
    if (!columns[i]) {
      return MakeError(ErrorCode::kMissingField, fmt::format("column {}", names[i]));
    }
  }

  std::map<std::string, TosAnnotation> annotations;
  std::size_t row_no = 0;
  while (auto next = reader.NextRow()) {
    if (!next->ok()) return next->error();
    const std::vector<std::string>& row = next->value();
    ++row_no;
    auto cell = [&](int i) -> std::string_view {
      return *columns[i] < row.size() ? TrimAscii(row[*columns[i]]) : std::string_view();
    };
    auto unknown = [&](int i) {
      return MakeError(ErrorCode::kUnknownEnumValue,
                       fmt::format("row {}, field {}: '{}'", row_no, names[i], cell(i)));
    };
    TosAnnotation annotation;
    annotation.base_domain = AsciiLower(cell(0));
    if (annotation.base_domain.empty()) {
      return MakeError(ErrorCode::kMissingField, fmt::format("row {}, field base_domain", row_no));
    }
    auto category = ParseTosCategory(cell(1));
    if (!category) return unknown(1);
    auto license = ParseLicenseType(cell(2));
    if (!license) return unknown(2);
    auto policy = ParseScrapingPolicy(cell(3));
    if (!policy) return unknown(3);
    annotation.category = *category;
    annotation.license_type = *license;
    annotation.scraping_policy = *policy;
    std::string key = annotation.base_domain;
    if (!annotations.emplace(key, std::move(annotation)).second) {
      return MakeError(ErrorCode::kDuplicateDomain, fmt::format("row {}: {}", row_no, key));
    }
  }
  return annotations;
}

Result<std::map<std::string, TosAnnotation>> LoadAnnotations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return MakeError(ErrorCode::kIoError, "cannot read " + path.string());
  return ReadAnnotations(in);
}

Result<std::vector<TosShare>> WeightedDistribution(
    const std::map<std::string, TosAnnotation>& annotations,
    const std::map<std::string, std::uint64_t>& counts, TosAttribute attribute) {
  std::vector<TosShare> shares;
  for (std::string_view label : CodebookValues(attribute)) shares.push_back({label});
  std::uint64_t total = 0;
  for (const auto& [domain, annotation] : annotations) {
    auto it = counts.find(domain);
    if (it == counts.end()) return MakeError(ErrorCode::kMissingWeight, domain);
    std::string_view label = CodebookLabel(annotation, attribute);
    for (TosShare& share : shares) {
      if (share.value == label) share.samples += it->second;
    }
    total += it->second;
  }
  if (total == 0) {
    return MakeError(ErrorCode::kMissingWeight, "annotated domains carry no samples");
  }
  for (TosShare& share : shares) {
    share.share = static_cast<double>(share.samples) / static_cast<double>(total);
  }
  return shares;
}

void WriteTosCsv(std::ostream& out, TosAttribute attribute, const std::vector<TosShare>& shares) {
  for (const TosShare& share : shares) {
    out << CsvRow({std::string(TosAttributeName(attribute)), std::string(share.value),
                   std::to_string(share.samples), fmt::format("{:.17g}", share.share)})
        << '\n';
  }
}

void WriteTosMarkdown(std::ostream& out, TosAttribute attribute,
                      const std::vector<TosShare>& shares) {
  std::uint64_t total = 0;
  for (const TosShare& share : shares) total += share.samples;
  out << fmt::format("| {} | Samples | % of {} annotated samples |\n", TosAttributeName(attribute),
                     total);
  out << "|---|---:|---:|\n";
  for (const TosShare& share : shares) {
    out << fmt::format("| {} | {} | {:.1f}% |\n", share.value, share.samples, share.share * 100.0);
  }
}

}  // namespace consent_audit
