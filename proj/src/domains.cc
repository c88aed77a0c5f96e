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

#include "consent_audit/domains.h"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>

#include "consent_audit/csv.h"
#include "consent_audit/url.h"

namespace consent_audit {

Result<FullDomain> ExtractFullDomain(std::string_view url) {
  auto parsed = ParseUrl(url);
  if (!parsed.ok()) return MakeError(ErrorCode::kNoHost, parsed.error().message);
  return FullDomain{std::move(parsed->host), parsed->host_is_ip};
}

BaseDomain ExtractBaseDomain(const FullDomain& full, const SuffixRules& rules) {
  if (full.ip_literal) return {full.host, BaseDomainKind::kIpLiteral};
  std::string_view host = full.host;
  std::string_view suffix = rules.PublicSuffix(host);
  if (suffix.size() >= host.size()) return {full.host, BaseDomainKind::kPublicSuffix};
  // One more label to the left of the suffix.
  std::string_view prefix = host.substr(0, host.size() - suffix.size() - 1);
  std::size_t dot = prefix.rfind('.');
  std::size_t start = dot == std::string_view::npos ? 0 : dot + 1;
  return {std::string(host.substr(start)), BaseDomainKind::kRegistrable};
}

void DomainCounter::Add(const FullDomain& full, const BaseDomain& base, std::uint64_t weight) {
  base_counts_[base.domain] += weight;
  auto& entry = full_[full.host];
  entry.base = base.domain;
  entry.count += weight;
  base_to_full_[base.domain].insert(full.host);
  total_ += weight;
}

void DomainCounter::Merge(const DomainCounter& other) {
  for (const auto& [base, count] : other.base_counts_) base_counts_[base] += count;
  for (const auto& [host, entry] : other.full_) {
    auto& mine = full_[host];
    mine.base = entry.base;
    mine.count += entry.count;
  }
  for (const auto& [base, hosts] : other.base_to_full_) {
    base_to_full_[base].insert(hosts.begin(), hosts.end());
  }
  total_ += other.total_;
}

Result<BaseDomain> DomainTracker::Add(const Sample& sample) {
  auto parsed = ParseUrl(sample.url);
  if (!parsed.ok()) return MakeError(ErrorCode::kNoHost, parsed.error().message);
  FullDomain full{std::move(parsed->host), parsed->host_is_ip};
  auto it = cache_.find(full.host);
  if (it == cache_.end()) {
    it = cache_.emplace(full.host, ExtractBaseDomain(full, rules_)).first;
  }
  counter_.Add(full, it->second);
  return it->second;
}

DomainCounter CountDomains(const std::vector<Sample>& samples, const SuffixRules& rules) {
  DomainTracker tracker(rules);
  for (const auto& sample : samples) (void)tracker.Add(sample);
  return tracker.counter();
}

std::vector<DomainShare> TopK(const DomainCounter& counter, std::size_t k) {
  std::vector<DomainShare> rows;
  rows.reserve(counter.base_counts().size());
  for (const auto& [domain, count] : counter.base_counts()) {
    auto hosts = counter.base_to_full().find(domain);
    rows.push_back({domain, count,
                    counter.total() ? static_cast<double>(count) / counter.total() : 0.0,
                    hosts == counter.base_to_full().end() ? 0 : hosts->second.size()});
  }
  auto by_count = [](const DomainShare& a, const DomainShare& b) {
    return a.count != b.count ? a.count > b.count : a.domain < b.domain;
  };
  if (k < rows.size()) {
    std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(k), rows.end(),
                      by_count);
    rows.resize(k);
  } else {
    std::sort(rows.begin(), rows.end(), by_count);
  }
  return rows;
}

void WriteDomainsCsv(std::ostream& out, const std::vector<DomainShare>& rows) {
  out << "base_domain,count,share,n_full_domains\n";
  for (const auto& row : rows) {
    out << CsvRow({row.domain, std::to_string(row.count), fmt::format("{:.17g}", row.share),
                   std::to_string(row.n_full_domains)})
        << '\n';
  }
}

void WriteFullDomainsCsv(std::ostream& out, const DomainCounter& counter,
                         const std::set<std::string>* only_bases) {
  out << "full_domain,base_domain,count\n";
  for (const auto& [host, entry] : counter.full_domains()) {
    if (only_bases && !only_bases->count(entry.base)) continue;
    out << CsvRow({host, entry.base, std::to_string(entry.count)}) << '\n';
  }
}

Result<DomainWeights> ReadDomainWeights(const std::filesystem::path& path,
                                        std::string_view key_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return MakeError(ErrorCode::kIoError, "cannot open " + path.string());
  CsvReader csv(in);
  if (auto header = csv.ReadHeader(); !header.ok()) return header.error();
  auto key = csv.Column(key_column);
  auto count = csv.Column("count");
  if (!key || !count) {
    return MakeError(ErrorCode::kInvalidArgument,
                     fmt::format("{}: need columns {} and count", path.string(), key_column));
  }
  auto base = csv.Column("base_domain");
  DomainWeights weights;
  while (auto row = csv.NextRow()) {
    if (!row->ok()) return row->error();
    const auto& fields = row->value();
    if (fields.size() != csv.header().size()) {
      return MakeError(ErrorCode::kMalformedLine,
                       fmt::format("{}:{}: wrong field count", path.string(), csv.record_line()));
    }
    std::uint64_t value = 0;
    const std::string& text = fields[*count];
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size()) {
      return MakeError(
          ErrorCode::kMalformedLine,
          fmt::format("{}:{}: bad count '{}'", path.string(), csv.record_line(), text));
    }
    weights.counts[fields[*key]] += value;
    if (base && *base != *key) weights.base_of[fields[*key]] = fields[*base];
  }
  return weights;
}

}  // namespace consent_audit
