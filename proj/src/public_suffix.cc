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

#include "consent_audit/public_suffix.h"

#include <fstream>
#include <sstream>

#include "consent_audit/strings.h"
#include "consent_audit/url.h"

namespace consent_audit {
namespace {

// Drops `labels` leading labels; an empty view when there are not enough.
std::string_view DropLabels(std::string_view host, int labels) {
  for (int i = 0; i < labels; ++i) {
    std::size_t dot = host.find('.');
    if (dot == std::string_view::npos) return {};
    host.remove_prefix(dot + 1);
  }
  return host;
}

}  // namespace

Result<SuffixRules> SuffixRules::Parse(std::string_view text, SuffixSections sections) {
  SuffixRules rules;
  bool in_private = false;
  for (std::string_view line : SplitView(text, '\n')) {
    line = TrimAscii(line);
    if (line.starts_with("//")) {
      if (line.find("===BEGIN PRIVATE DOMAINS===") != std::string_view::npos) in_private = true;
      if (line.find("===END PRIVATE DOMAINS===") != std::string_view::npos) in_private = false;
      if (auto pos = line.find("VERSION:");
          pos != std::string_view::npos && rules.version_.empty()) {
        rules.version_ = std::string(TrimAscii(line.substr(pos + 8)));
      }
      continue;
    }
    if (line.empty()) continue;
    if (in_private && sections == SuffixSections::kIcannOnly) continue;
    // Rules end at the first whitespace.
    line = line.substr(0, line.find_first_of(" \t"));
    std::optional<std::string> ascii;
    if (line.starts_with("!")) {
      ascii = HostToAscii(line.substr(1));
      if (ascii) rules.exception_.insert(std::move(*ascii));
    } else if (line.starts_with("*.")) {
      ascii = HostToAscii(line.substr(2));
      if (ascii) rules.wildcard_.insert(std::move(*ascii));
    } else {
      ascii = HostToAscii(line);
      if (ascii) rules.exact_.insert(std::move(*ascii));
    }
  }
  if (rules.rule_count() == 0) {
    return MakeError(ErrorCode::kInvalidArgument, "public suffix list has no rules");
  }
  return rules;
}

Result<SuffixRules> SuffixRules::LoadFile(const std::filesystem::path& path,
                                          SuffixSections sections) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return MakeError(ErrorCode::kIoError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str(), sections);
}

Result<SuffixRules> SuffixRules::LoadDefault() {
  return LoadFile(DefaultSuffixListPath(), SuffixSections::kIcannOnly);
}

SuffixRules SuffixRules::LastTwoLabels() {
  SuffixRules rules;
  rules.last_two_labels_ = true;
  rules.version_ = "last-two-labels";
  return rules;
}

std::string_view SuffixRules::PublicSuffix(std::string_view host) const {
  if (last_two_labels_) {
    std::size_t dot = host.rfind('.');
    return dot == std::string_view::npos ? host : host.substr(dot + 1);
  }
  // An exception rule always prevails; otherwise the longest matching rule
  // does, so walk suffixes from longest to shortest.
  std::string key;
  for (std::string_view suffix = host; !suffix.empty(); suffix = DropLabels(suffix, 1)) {
    key.assign(suffix);
    if (exception_.count(key)) return DropLabels(suffix, 1);
  }
  for (std::string_view suffix = host; !suffix.empty(); suffix = DropLabels(suffix, 1)) {
    key.assign(suffix);
    if (exact_.count(key)) return suffix;
    std::string_view parent = DropLabels(suffix, 1);
    if (!parent.empty() && wildcard_.count(std::string(parent))) return suffix;
  }
  std::size_t dot = host.rfind('.');
  return dot == std::string_view::npos ? host : host.substr(dot + 1);
}

std::filesystem::path DefaultSuffixListPath() {
  return std::filesystem::path(CONSENT_AUDIT_DATA_DIR) / "public_suffix_list.dat";
}

}  // namespace consent_audit
