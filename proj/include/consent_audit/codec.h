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

// Byte encodings and content digests, backed by OpenSSL.

#ifndef CONSENT_AUDIT_CODEC_H_
#define CONSENT_AUDIT_CODEC_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "consent_audit/result.h"

namespace consent_audit {

std::string Base64Encode(std::span<const std::uint8_t> bytes);
// Standard alphabet with padding; whitespace is not accepted.
std::optional<std::vector<std::uint8_t>> Base64Decode(std::string_view text);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);
Result<std::string> Sha256File(const std::filesystem::path& path);

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_CODEC_H_
