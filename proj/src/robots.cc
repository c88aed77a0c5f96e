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

#include "consent_audit/robots.h"

#include <algorithm>
#include <unordered_set>

#include "consent_audit/strings.h"

namespace consent_audit {
namespace {

enum class Directive { kUserAgent, kAllow, kDisallow, kOther };

// Frequent misspellings seen in the wild are accepted.
Directive ClassifyKey(std::string_view key) {
  std::string lower = AsciiLower(key);
  if (lower == "user-agent" || lower == "useragent" || lower == "user agent") {
    return Directive::kUserAgent;
  }
  if (lower == "allow") return Directive::kAllow;
  if (lower == "disallow" || lower == "dissallow" || lower == "dissalow" || lower == "disalow" ||
      lower == "diasllow" || lower == "disallaw") {
    return Directive::kDisallow;
  }
  return Directive::kOther;
}

bool SameAgent(std::string_view a, std::string_view b, AgentMatch match) {
  return match == AgentMatch::kExact ? a == b : EqualsIgnoreAsciiCase(a, b);
}

std::string AgentKey(std::string_view agent, AgentMatch match) {
  return match == AgentMatch::kExact ? std::string(agent) : AsciiLower(agent);
}

}  // namespace

RobotsDoc ParseRobots(std::string_view body) {
  RobotsDoc doc;
  if (body.starts_with("\xEF\xBB\xBF")) body.remove_prefix(3);

  bool in_agent_run = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t eol = body.find_first_of("\r\n", pos);
    if (eol == std::string_view::npos) eol = body.size();
    std::string_view line = body.substr(pos, eol - pos);
    pos = eol;
    if (pos < body.size() && body[pos] == '\r') ++pos;
    if (pos < body.size() && body[pos] == '\n') ++pos;
    ++line_no;

    std::string_view content = line;
    if (std::size_t hash = content.find('#'); hash != std::string_view::npos) {
      std::string_view comment = TrimAscii(content.substr(hash + 1));
      doc.annotations.push_back({line_no, "#", std::string(comment)});
      content = content.substr(0, hash);
    }
    content = TrimAscii(content);
    std::size_t colon = content.find(':');
    if (content.empty() || colon == std::string_view::npos) continue;

    std::string_view key = TrimAscii(content.substr(0, colon));
    std::string_view value = TrimAscii(content.substr(colon + 1));
    switch (ClassifyKey(key)) {
      case Directive::kUserAgent:
        if (value.empty()) break;
        if (!in_agent_run || doc.groups.empty()) doc.groups.emplace_back();
        doc.groups.back().agents.emplace_back(value);
        in_agent_run = true;
        break;
      case Directive::kAllow:
      case Directive::kDisallow: {
        RuleKind kind =
            ClassifyKey(key) == Directive::kAllow ? RuleKind::kAllow : RuleKind::kDisallow;
        if (doc.groups.empty()) {
          doc.annotations.push_back({line_no, std::string(key), std::string(value)});
          break;
        }
        doc.groups.back().rules.push_back({kind, std::string(value)});
        in_agent_run = false;
        break;
      }
      case Directive::kOther:
        doc.annotations.push_back({line_no, std::string(key), std::string(value)});
        break;
    }
  }
  return doc;
}

AgentVerdict ClassifyAgent(const RobotsDoc& doc, std::string_view agent, AgentMatch match) {
  agent = TrimAscii(agent);
  AgentVerdict result{std::string(agent), Verdict::kNotMentioned};
  bool mentioned = false;
  bool root_disallow = false;
  bool any_allow = false;
  bool any_disallow = false;
  for (const auto& group : doc.groups) {
    bool names_agent =
        std::any_of(group.agents.begin(), group.agents.end(),
                    [&](const std::string& a) { return SameAgent(a, agent, match); });
    if (!names_agent) continue;
    mentioned = true;
    for (const auto& rule : group.rules) {
      if (rule.kind == RuleKind::kAllow) {
        any_allow = true;
      } else if (!rule.path.empty()) {
        any_disallow = true;
        if (rule.path == "/") root_disallow = true;
      }
    }
  }
  if (!mentioned) return result;
  if (root_disallow && !any_allow) {
    result.verdict = Verdict::kAllDisallowed;
  } else if (!any_disallow) {
    result.verdict = Verdict::kNoneDisallowed;
  } else {
    result.verdict = Verdict::kSomeDisallowed;
  }
  return result;
}

std::vector<std::string> MentionedAgents(const RobotsDoc& doc, AgentMatch match) {
  std::vector<std::string> agents;
  std::unordered_set<std::string> seen;
  for (const auto& group : doc.groups) {
    for (const auto& agent : group.agents) {
      if (seen.insert(AgentKey(agent, match)).second) agents.push_back(agent);
    }
  }
  return agents;
}

std::vector<AgentVerdict> ClassifyAll(const RobotsDoc& doc, AgentMatch match) {
  std::vector<AgentVerdict> verdicts;
  for (const auto& agent : MentionedAgents(doc, match)) {
    verdicts.push_back(ClassifyAgent(doc, agent, match));
  }
  return verdicts;
}

Verdict AggregateVerdicts(const std::vector<AgentVerdict>& verdicts) {
  bool all = !verdicts.empty();
  bool any_restriction = false;
  for (const auto& v : verdicts) {
    if (v.verdict != Verdict::kAllDisallowed) all = false;
    if (v.verdict == Verdict::kAllDisallowed || v.verdict == Verdict::kSomeDisallowed) {
      any_restriction = true;
    }
  }
  if (all) return Verdict::kAllDisallowed;
  if (any_restriction) return Verdict::kSomeDisallowed;
  return Verdict::kNoneDisallowed;
}

Result<Verdict> AggregateAllAgents(const RobotsDoc& doc, AgentMatch match) {
  auto verdicts = ClassifyAll(doc, match);
  if (verdicts.empty()) return MakeError(ErrorCode::kNoAgents, "robots.txt names no agents");
  return AggregateVerdicts(verdicts);
}

}  // namespace consent_audit
