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

// Sample-weighted robots.txt observation tables.
//
// A sample observes an agent when the robots.txt of the sample's full domain
// mentions that agent. Agent rows add the sample's weight under the agent's
// verdict; the "All Agents" row adds it once under the file's aggregate
// verdict. Full domains without a fetched robots.txt feed no row and are
// reported as unattributed weight.

#ifndef CONSENT_AUDIT_TALLY_H_
#define CONSENT_AUDIT_TALLY_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "consent_audit/result.h"
#include "consent_audit/robots.h"
#include "consent_audit/types.h"

namespace consent_audit {

struct AgentInfo {
  std::string agent;
  bool ai_purpose = false;
};

// Agents to report, in file order. Lookups honor the configured AgentMatch.
class AgentList {
 public:
  AgentList() = default;
  explicit AgentList(std::vector<AgentInfo> agents) : agents_(std::move(agents)) {}

  // One agent per line: "<token> [ai]". '#' starts a comment.
  static Result<AgentList> Parse(std::string_view text);
  static Result<AgentList> LoadFile(const std::filesystem::path& path);

  const std::vector<AgentInfo>& agents() const { return agents_; }
  const AgentInfo* Find(std::string_view agent, AgentMatch match) const;

 private:
  std::vector<AgentInfo> agents_;
};

// The agents studied in the source census, AI-purposed ones flagged.
const AgentList& BuiltinAgentList();

struct ObservationRow {
  std::string agent;
  bool ai_purpose = false;
  std::uint64_t observed = 0;
  std::uint64_t all_disallowed = 0;
  std::uint64_t some_disallowed = 0;
  std::uint64_t none_disallowed = 0;

  double AllDisallowedRate() const;
  bool operator==(const ObservationRow&) const = default;
};

struct ObservationTable {
  ObservationRow all_agents{"All Agents"};
  std::vector<ObservationRow> rows;  // observed desc, then agent name
  std::uint64_t attempted_domains = 0;
  std::uint64_t robots_domains = 0;        // with a fetched robots.txt
  std::uint64_t unattributed_samples = 0;  // domain has no robots.txt
  std::uint64_t no_agent_samples = 0;      // robots.txt names no agent

  bool operator==(const ObservationTable&) const = default;
};

struct TallyOptions {
  AgentMatch match = AgentMatch::kExact;
  // false: a row for every mentioned agent, flagged from the list when known.
  bool listed_only = true;
};

// Accumulates per-domain contributions; Merge() is associative and
// commutative so workers can reduce partials in any order.
class Tally {
 public:
  Tally(const AgentList& agents, TallyOptions options) : agents_(&agents), options_(options) {}

  // `doc` is null when the domain has no usable robots.txt.
  void AddDomain(const RobotsDoc* doc, std::uint64_t weight);
  void Merge(const Tally& other);
  ObservationTable Finish() const;

 private:
  const AgentList* agents_;
  TallyOptions options_;
  ObservationRow all_agents_{"All Agents"};
  std::map<std::string, ObservationRow> rows_;
  std::uint64_t attempted_ = 0;
  std::uint64_t robots_domains_ = 0;
  std::uint64_t unattributed_ = 0;
  std::uint64_t no_agent_ = 0;
};

// Tallies every domain in `weights`; domains missing from `docs` count as
// unattributed. Docs without a weight entry contribute nothing.
ObservationTable TallyObservations(const std::map<std::string, RobotsDoc>& docs,
                                   const std::map<std::string, std::uint64_t>& weights,
                                   const AgentList& agents, TallyOptions options = {});

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_TALLY_H_
