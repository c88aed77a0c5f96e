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

#ifndef CONSENT_AUDIT_DOMAINS_H_
#define CONSENT_AUDIT_DOMAINS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "consent_audit/public_suffix.h"
#include "consent_audit/result.h"
#include "consent_audit/types.h"

namespace consent_audit {

// Lowercased host of an absolute URL, port dropped. NoHost otherwise.
Result<FullDomain> ExtractFullDomain(std::string_view url);

// Registrable domain: the public suffix plus one label. Public suffixes and
// IP literals come back unchanged with the matching kind.
BaseDomain ExtractBaseDomain(const FullDomain& full, const SuffixRules& rules);

// Per-base and per-full-domain sample counts. Merge() is associative and
// commutative so per-worker counters can be reduced in any order.
class DomainCounter {
 public:
  struct FullEntry {
    std::string base;
    std::uint64_t count = 0;
    bool operator==(const FullEntry&) const = default;
  };

  void Add(const FullDomain& full, const BaseDomain& base, std::uint64_t weight = 1);
  void Merge(const DomainCounter& other);

  const std::map<std::string, std::uint64_t>& base_counts() const { return base_counts_; }
  const std::map<std::string, FullEntry>& full_domains() const { return full_; }
  const std::map<std::string, std::set<std::string>>& base_to_full() const { return base_to_full_; }
  std::uint64_t total() const { return total_; }

  bool operator==(const DomainCounter&) const = default;

 private:
  std::map<std::string, std::uint64_t> base_counts_;
  std::map<std::string, FullEntry> full_;
  std::map<std::string, std::set<std::string>> base_to_full_;
  std::uint64_t total_ = 0;
};

// Resolves sample URLs to domains with a per-host cache, feeding a counter.
class DomainTracker {
 public:
  explicit DomainTracker(const SuffixRules& rules) : rules_(rules) {}

  // Returns the sample's base domain, or NoHost.
  Result<BaseDomain> Add(const Sample& sample);

  const DomainCounter& counter() const { return counter_; }

 private:
  const SuffixRules& rules_;
  std::unordered_map<std::string, BaseDomain> cache_;
  DomainCounter counter_;
};

DomainCounter CountDomains(const std::vector<Sample>& samples, const SuffixRules& rules);

struct DomainShare {
  std::string domain;
  std::uint64_t count = 0;
  double share = 0.0;  // of all counted samples
  std::size_t n_full_domains = 0;
};

// Descending by count, ties by domain name.
std::vector<DomainShare> TopK(const DomainCounter& counter, std::size_t k);

// domains.csv: base_domain,count,share,n_full_domains
void WriteDomainsCsv(std::ostream& out, const std::vector<DomainShare>& rows);
// full_domains.csv: full_domain,base_domain,count
void WriteFullDomainsCsv(std::ostream& out, const DomainCounter& counter,
                         const std::set<std::string>* only_bases = nullptr);

struct DomainWeights {
  std::map<std::string, std::uint64_t> counts;
  std::map<std::string, std::string> base_of;  // full_domain files only
};

// Reads a "<key>,...,count" CSV keyed by `key_column` (base_domain or
// full_domain).
Result<DomainWeights> ReadDomainWeights(const std::filesystem::path& path,
                                        std::string_view key_column);

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_DOMAINS_H_
