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

// Copyright claims in image metadata: the pre-decoded key-value channel and a
// raw EXIF (JPEG APP1 / TIFF) parser that reads tag 0x8298 from IFD0.

#ifndef CONSENT_AUDIT_EXIF_H_
#define CONSENT_AUDIT_EXIF_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "consent_audit/result.h"
#include "consent_audit/types.h"

namespace consent_audit {

inline constexpr std::uint16_t kExifCopyrightTag = 0x8298;

// "Copyright" (exact case) or "0x8298" (any case) with a value that is not
// blank. "Copyright" wins when both are present.
std::optional<std::string> CopyrightFromMap(const std::map<std::string, std::string>& metadata);

struct ExifCopyright {
  std::string value;
  // EXIF packs "photographer\0editor\0"; this holds the editor part.
  std::string remainder;

  bool operator==(const ExifCopyright&) const = default;
};

// Accepts a whole JPEG, a bare APP1 payload ("Exif\0\0" + TIFF) or a TIFF
// stream. Returns nullopt when there is no EXIF data or no ASCII copyright
// entry in IFD0. Never reads outside `bytes`.
//
// Errors: TruncatedSegment when a declared length or offset runs past the
// available bytes; MalformedIfd when the TIFF header or IFD entry count is
// inconsistent.
Result<std::optional<ExifCopyright>> ParseExifCopyright(std::span<const std::uint8_t> bytes);

// Both EXIF channels of a sample: the metadata map first, then raw bytes.
// Parse errors in the raw bytes are returned in `error` and count as no hit.
struct ExifFinding {
  std::optional<ExifCopyright> copyright;
  std::optional<Error> error;
};
ExifFinding FindExifCopyright(const Sample& sample);

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_EXIF_H_
