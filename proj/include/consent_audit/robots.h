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

// robots.txt parsing and per-agent permission verdicts.
//
// Verdicts only look at coverage, never at path algebra:
//   AllDisallowed   a "Disallow: /" rule and no Allow rule
//   NoneDisallowed  no Disallow rule with a non-empty path
//   SomeDisallowed  anything else
// computed over the union of every group that names the agent.

#ifndef CONSENT_AUDIT_ROBOTS_H_
#define CONSENT_AUDIT_ROBOTS_H_

#include <string>
#include <string_view>
#include <vector>

#include "consent_audit/result.h"
#include "consent_audit/types.h"

namespace consent_audit {

enum class AgentMatch {
  kCaseInsensitive,
  kExact,  // "claudebot" and "ClaudeBot" are different agents
};

// Line-oriented and total: any input produces a doc. Consecutive User-agent
// lines share one group; Allow/Disallow attach to the open group; rules
// before the first User-agent are dropped into annotations. A leading UTF-8
// BOM, blank lines and lines without a colon are skipped.
RobotsDoc ParseRobots(std::string_view body);

AgentVerdict ClassifyAgent(const RobotsDoc& doc, std::string_view agent,
                           AgentMatch match = AgentMatch::kCaseInsensitive);

// Distinct agent tokens in first-seen order ("*" included). Under
// kCaseInsensitive, the first spelling seen stands for all case variants.
std::vector<std::string> MentionedAgents(const RobotsDoc& doc,
                                         AgentMatch match = AgentMatch::kCaseInsensitive);

// Verdict for every mentioned agent, in MentionedAgents() order.
std::vector<AgentVerdict> ClassifyAll(const RobotsDoc& doc,
                                      AgentMatch match = AgentMatch::kCaseInsensitive);

// One verdict for the whole file: AllDisallowed if every mentioned agent is
// AllDisallowed; SomeDisallowed if any is All- or SomeDisallowed; else
// NoneDisallowed. NoAgents for a doc without agents.
Result<Verdict> AggregateAllAgents(const RobotsDoc& doc,
                                   AgentMatch match = AgentMatch::kCaseInsensitive);
Verdict AggregateVerdicts(const std::vector<AgentVerdict>& verdicts);

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_ROBOTS_H_
