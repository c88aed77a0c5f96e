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

#include "consent_audit/tally.h"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "consent_audit/strings.h"

namespace consent_audit {
namespace {

void AddVerdict(ObservationRow& row, Verdict verdict, std::uint64_t weight) {
  switch (verdict) {
    case Verdict::kAllDisallowed: row.all_disallowed += weight; break;
    case Verdict::kSomeDisallowed: row.some_disallowed += weight; break;
    case Verdict::kNoneDisallowed: row.none_disallowed += weight; break;
    case Verdict::kNotMentioned: return;
  }
  row.observed += weight;
}

void MergeRow(ObservationRow& into, const ObservationRow& from) {
  into.observed += from.observed;
  into.all_disallowed += from.all_disallowed;
  into.some_disallowed += from.some_disallowed;
  into.none_disallowed += from.none_disallowed;
}

std::string RowKey(std::string_view agent, AgentMatch match) {
  return match == AgentMatch::kExact ? std::string(agent) : AsciiLower(agent);
}

}  // namespace

Result<AgentList> AgentList::Parse(std::string_view text) {
  std::vector<AgentInfo> agents;
  std::size_t line_no = 0;
  for (std::string_view line : SplitView(text, '\n')) {
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = TrimAscii(line);
    if (line.empty()) continue;
    std::size_t split = line.find_first_of(" \t");
    AgentInfo info{std::string(line.substr(0, split))};
    if (split != std::string_view::npos) {
      std::string_view purpose = TrimAscii(line.substr(split));
      if (EqualsIgnoreAsciiCase(purpose, "ai")) {
        info.ai_purpose = true;
      } else if (!EqualsIgnoreAsciiCase(purpose, "other")) {
        return MakeError(ErrorCode::kInvalidField,
                         fmt::format("agent list line {}: unknown purpose '{}'", line_no, purpose));
      }
    }
    agents.push_back(std::move(info));
  }
  return AgentList(std::move(agents));
}

Result<AgentList> AgentList::LoadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return MakeError(ErrorCode::kIoError, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

const AgentInfo* AgentList::Find(std::string_view agent, AgentMatch match) const {
  for (const auto& info : agents_) {
    bool same = match == AgentMatch::kExact ? info.agent == agent
                                            : EqualsIgnoreAsciiCase(info.agent, agent);
    if (same) return &info;
  }
  return nullptr;
}

const AgentList& BuiltinAgentList() {
  static const AgentList* const kList = new AgentList(std::vector<AgentInfo>{
      {"GPTBot", true},
      {"*", false},
      {"CCBot", true},
      {"Bytespider", true},
      {"googlebot-image", false},
      {"claudebot", true},
      {"Google-Extended", true},
      {"SentiBot", false},
      {"Baiduspider", false},
      {"FacebookBot", false},
      {"omgili", false},
      {"Amazonbot", false},
      {"omgilibot", false},
      {"Googlebot-Image", false},
      {"Bingbot", false},
      {"Mediapartners-Google*", false},
      {"GoogleContextual", false},
      {"Twitterbot", false},
      {"bingbot", false},
      {"ClaudeBot", true},
      {"Applebot-Extended", true},
      {"PetalBot", false},
      {"magpie-crawler", false},
      {"applebot", false},
      {"AdsBot-Google", false},
      {"Yandex", false},
      {"facebookexternalhit", false},
      {"AdIdxBot", false},
      {"Googlebot", false},
      {"Pinterestbot", false},
      {"ia_archiver", false},
      {"anthropic-ai", true},
      {"ImagesiftBot", false},
      {"meta-externalagent", true},
      {"PerplexityBot", false},
      {"MJ12bot", false},
  });
  return *kList;
}

double ObservationRow::AllDisallowedRate() const {
  return observed == 0 ? 0.0 : static_cast<double>(all_disallowed) / static_cast<double>(observed);
}

void Tally::AddDomain(const RobotsDoc* doc, std::uint64_t weight) {
  ++attempted_;
  if (!doc) {
    unattributed_ += weight;
    return;
  }
  ++robots_domains_;
  std::vector<AgentVerdict> verdicts = ClassifyAll(*doc, options_.match);
  if (verdicts.empty()) {
    no_agent_ += weight;
    return;
  }
  AddVerdict(all_agents_, AggregateVerdicts(verdicts), weight);
  for (const AgentVerdict& verdict : verdicts) {
    const AgentInfo* info = agents_->Find(verdict.agent, options_.match);
    if (!info && options_.listed_only) continue;
    std::string name = info ? info->agent : verdict.agent;
    auto [it, inserted] = rows_.try_emplace(RowKey(name, options_.match));
    if (inserted) {
      it->second.agent = name;
      it->second.ai_purpose = info && info->ai_purpose;
    }
    AddVerdict(it->second, verdict.verdict, weight);
  }
}

void Tally::Merge(const Tally& other) {
  MergeRow(all_agents_, other.all_agents_);
  for (const auto& [key, row] : other.rows_) {
    auto [it, inserted] = rows_.try_emplace(key, row);
    if (!inserted) MergeRow(it->second, row);
  }
  attempted_ += other.attempted_;
  robots_domains_ += other.robots_domains_;
  unattributed_ += other.unattributed_;
  no_agent_ += other.no_agent_;
}

ObservationTable Tally::Finish() const {
  ObservationTable table;
  table.all_agents = all_agents_;
  for (const auto& [key, row] : rows_) table.rows.push_back(row);
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ObservationRow& a, const ObservationRow& b) {
              if (a.observed != b.observed) return a.observed > b.observed;
              return a.agent < b.agent;
            });
  table.attempted_domains = attempted_;
  table.robots_domains = robots_domains_;
  table.unattributed_samples = unattributed_;
  table.no_agent_samples = no_agent_;
  return table;
}

ObservationTable TallyObservations(const std::map<std::string, RobotsDoc>& docs,
                                   const std::map<std::string, std::uint64_t>& weights,
                                   const AgentList& agents, TallyOptions options) {
  Tally tally(agents, options);
  for (const auto& [domain, weight] : weights) {
    auto it = docs.find(domain);
    tally.AddDomain(it == docs.end() ? nullptr : &it->second, weight);
  }
  return tally.Finish();
}

}  // namespace consent_audit
