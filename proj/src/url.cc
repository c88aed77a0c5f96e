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

#include "consent_audit/url.h"

#include <unicode/idna.h>

#include <algorithm>
#include <charconv>
#include <memory>

#include "consent_audit/strings.h"

namespace consent_audit {
namespace {

bool IsSchemeChar(char c) { return IsAsciiAlnum(c) || c == '+' || c == '-' || c == '.'; }

bool IsHostChar(unsigned char c) {
  return IsAsciiAlnum(static_cast<char>(c)) || c == '-' || c == '.' || c == '_' || c == '%' ||
         c >= 0x80;
}

}  // namespace

bool IsIpv4Literal(std::string_view host) {
  int parts = 0;
  std::size_t pos = 0;
  while (pos <= host.size()) {
    std::size_t dot = host.find('.', pos);
    if (dot == std::string_view::npos) dot = host.size();
    std::string_view part = host.substr(pos, dot - pos);
    if (part.empty() || part.size() > 3) return false;
    if (!std::all_of(part.begin(), part.end(), IsAsciiDigit)) return false;
    int value = 0;
    std::from_chars(part.data(), part.data() + part.size(), value);
    if (value > 255) return false;
    ++parts;
    pos = dot + 1;
  }
  return parts == 4;
}

std::optional<std::string> HostToAscii(std::string_view host) {
  bool ascii = std::all_of(host.begin(), host.end(),
                           [](char c) { return static_cast<unsigned char>(c) < 0x80; });
  if (ascii) return AsciiLower(host);

  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::IDNA> idna(
      icu::IDNA::createUTS46Instance(UIDNA_NONTRANSITIONAL_TO_ASCII, status));
  if (U_FAILURE(status)) return std::nullopt;
  std::string out;
  icu::StringByteSink<std::string> sink(&out);
  icu::IDNAInfo info;
  idna->nameToASCII_UTF8(icu::StringPiece(host.data(), static_cast<int32_t>(host.size())), sink,
                         info, status);
  if (U_FAILURE(status) || info.hasErrors()) return std::nullopt;
  return out;
}

Result<ParsedUrl> ParseUrl(std::string_view url) {
  url = TrimAscii(url);
  std::size_t colon = url.find("://");
  if (colon == std::string_view::npos || colon == 0) {
    return MakeError(ErrorCode::kInvalidUrl, "not an absolute URL: " + std::string(url));
  }
  std::string_view scheme = url.substr(0, colon);
  if (!IsAsciiAlpha(scheme[0]) || !std::all_of(scheme.begin(), scheme.end(), IsSchemeChar)) {
    return MakeError(ErrorCode::kInvalidUrl, "bad scheme: " + std::string(url));
  }

  ParsedUrl parsed;
  parsed.scheme = AsciiLower(scheme);
  std::string_view rest = url.substr(colon + 3);
  std::size_t authority_end = rest.find_first_of("/?#");
  if (authority_end == std::string_view::npos) authority_end = rest.size();
  std::string_view authority = rest.substr(0, authority_end);
  parsed.path_and_query = std::string(rest.substr(authority_end));

  if (std::size_t at = authority.rfind('@'); at != std::string_view::npos) {
    authority.remove_prefix(at + 1);
  }

  std::string_view host;
  std::string_view port;
  if (!authority.empty() && authority.front() == '[') {
    std::size_t close = authority.find(']');
    if (close == std::string_view::npos) {
      return MakeError(ErrorCode::kInvalidUrl, "unterminated IPv6 literal: " + std::string(url));
    }
    host = authority.substr(1, close - 1);
    std::string_view after = authority.substr(close + 1);
    if (!after.empty()) {
      if (after.front() != ':') {
        return MakeError(ErrorCode::kInvalidUrl, "junk after IPv6 literal: " + std::string(url));
      }
      port = after.substr(1);
    }
    if (host.empty() || !std::all_of(host.begin(), host.end(), [](char c) {
          return IsAsciiHexDigit(c) || c == ':' || c == '.';
        })) {
      return MakeError(ErrorCode::kInvalidUrl, "bad IPv6 literal: " + std::string(url));
    }
    parsed.host = AsciiLower(host);
    parsed.host_is_ip = true;
  } else {
    std::size_t port_colon = authority.rfind(':');
    host = authority.substr(0, port_colon);
    if (port_colon != std::string_view::npos) port = authority.substr(port_colon + 1);
    while (!host.empty() && host.back() == '.') host.remove_suffix(1);
    if (host.empty()) {
      return MakeError(ErrorCode::kInvalidUrl, "no host: " + std::string(url));
    }
    if (!std::all_of(host.begin(), host.end(),
                     [](char c) { return IsHostChar(static_cast<unsigned char>(c)); })) {
      return MakeError(ErrorCode::kInvalidUrl, "bad host: " + std::string(url));
    }
    std::optional<std::string> ascii = HostToAscii(host);
    if (!ascii || ascii->empty()) {
      return MakeError(ErrorCode::kInvalidUrl, "host fails IDNA conversion: " + std::string(url));
    }
    parsed.host = std::move(*ascii);
    parsed.host_is_ip = IsIpv4Literal(parsed.host);
  }

  if (!port.empty()) {
    unsigned value = 0;
    auto [end, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (ec != std::errc() || end != port.data() + port.size() || value > 65535) {
      return MakeError(ErrorCode::kInvalidUrl, "bad port: " + std::string(url));
    }
    parsed.port = static_cast<std::uint16_t>(value);
  }
  return parsed;
}

}  // namespace consent_audit
