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

#ifndef CONSENT_AUDIT_SAMPLE_H_
#define CONSENT_AUDIT_SAMPLE_H_

#include <string>

#include "consent_audit/result.h"
#include "consent_audit/types.h"
#include "json.hpp"

namespace consent_audit {

// Validates one raw record (a JSON object as found on an input line) into a
// Sample. Required: uid (non-empty), url (absolute with host). Optional:
// caption, ocr_text, metadata (object), exif_raw (base64). Unknown fields are
// ignored; null counts as absent.
//
// Metadata values that are numbers or booleans are kept in their textual
// form; nested objects/arrays are rejected as InvalidField.
Result<Sample> ValidateSample(const nlohmann::json& record);

// One-line JSON encoding accepted by ValidateSample.
std::string SerializeSample(const Sample& sample);
nlohmann::json SampleToJson(const Sample& sample);

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_SAMPLE_H_
