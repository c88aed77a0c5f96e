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

#ifndef CONSENT_AUDIT_URL_H_
#define CONSENT_AUDIT_URL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "consent_audit/result.h"

namespace consent_audit {

// Just enough of RFC 3986 to pull the authority out of an absolute URL.
struct ParsedUrl {
  std::string scheme;  // lowercased
  std::string host;    // lowercased, ASCII (IDNA-converted), no brackets
  std::optional<std::uint16_t> port;
  std::string path_and_query;  // everything after the authority, may be empty
  bool host_is_ip = false;
};

// InvalidUrl for relative or hostless input.
Result<ParsedUrl> ParseUrl(std::string_view url);

bool IsIpv4Literal(std::string_view host);

// Converts a Unicode hostname to its ASCII (punycode) form. ASCII input is
// only lowercased.
std::optional<std::string> HostToAscii(std::string_view host);

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_URL_H_
