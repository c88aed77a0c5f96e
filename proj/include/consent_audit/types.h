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

// Shared domain types for the audit pipeline. Everything here is a value
// type with no I/O.

#ifndef CONSENT_AUDIT_TYPES_H_
#define CONSENT_AUDIT_TYPES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace consent_audit {

// One released url-text record. `url` is the src url pointing at the image
// asset, never the embedding page.
struct Sample {
  std::string uid;
  std::string url;
  std::string caption;
  std::optional<std::string> ocr_text;
  std::optional<std::map<std::string, std::string>> metadata;
  std::optional<std::vector<std::uint8_t>> exif_raw;

  bool operator==(const Sample&) const = default;
};

enum class Channel { kCaption, kOcr, kExif };

enum class MatchCategory {
  kCopyrightGeneral,
  kCopyrightSymbol,
  kCreativeCommons,
  kExifCopyright,
};

std::string_view ChannelName(Channel channel);
std::string_view MatchCategoryName(MatchCategory category);
std::optional<MatchCategory> ParseMatchCategory(std::string_view name);

struct Match {
  Channel channel;
  MatchCategory category;
  std::string text;
  // Byte offsets into the NFC-normalized channel text. Zero for EXIF.
  std::size_t begin = 0;
  std::size_t end = 0;
  // EXIF only: anything after the first NUL of the copyright value.
  std::string remainder;

  bool operator==(const Match&) const = default;
};

struct ConsentFlags {
  bool caption_hit = false;
  bool ocr_hit = false;
  bool exif_hit = false;
  std::vector<Match> matches;

  bool any() const { return caption_hit || ocr_hit || exif_hit; }
};

// Lowercased host without port. IP literals cannot be reduced to a
// registrable domain and are flagged.
struct FullDomain {
  std::string host;
  bool ip_literal = false;

  bool operator==(const FullDomain&) const = default;
};

enum class BaseDomainKind {
  kRegistrable,
  kPublicSuffix,  // the host is itself a public suffix
  kIpLiteral,
};

struct BaseDomain {
  std::string domain;
  BaseDomainKind kind = BaseDomainKind::kRegistrable;

  bool operator==(const BaseDomain&) const = default;
};

enum class RuleKind { kAllow, kDisallow };

struct RobotsRule {
  RuleKind kind;
  std::string path;

  bool operator==(const RobotsRule&) const = default;
};

struct AgentGroup {
  std::vector<std::string> agents;  // case preserved, whitespace trimmed
  std::vector<RobotsRule> rules;

  bool operator==(const AgentGroup&) const = default;
};

// Non-rule lines kept for inspection (Sitemap, Crawl-delay, comments...).
struct RobotsAnnotation {
  std::size_t line = 0;
  std::string key;
  std::string value;

  bool operator==(const RobotsAnnotation&) const = default;
};

struct RobotsDoc {
  std::vector<AgentGroup> groups;
  std::vector<RobotsAnnotation> annotations;
  std::string fetched_from;
  std::string fetched_at;
  std::string body_hash;
};

enum class Verdict {
  kAllDisallowed,
  kSomeDisallowed,
  kNoneDisallowed,
  kNotMentioned,
};

std::string_view VerdictName(Verdict verdict);

struct AgentVerdict {
  std::string agent;
  Verdict verdict = Verdict::kNotMentioned;
};

enum class TosCategory {
  kMarketplace,
  kCdnProvider,
  kWebsiteHosting,
  kBlogService,
  kStockPhoto,
  kContentSharingCommunity,
  kOther,
};

enum class LicenseType {
  kPersonalNoncommercialResearch,
  kConditionalCommercial,
  kOpenUnrestrictedCommercial,
  kNotApplicable,
};

enum class ScrapingPolicy {
  kNoScrapingAndAI,
  kNoScraping,
  kNoAI,
  kNoScrapingAndAIConditionally,
  kNotMentioned,
};

struct TosAnnotation {
  std::string base_domain;
  TosCategory category;
  LicenseType license_type;
  ScrapingPolicy scraping_policy;

  bool operator==(const TosAnnotation&) const = default;
};

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_TYPES_H_
