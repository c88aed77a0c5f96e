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

#include "consent_audit/sample.h"

#include "consent_audit/codec.h"
#include "consent_audit/url.h"

namespace consent_audit {
namespace {

using nlohmann::json;

const json* Field(const json& record, const char* name) {
  auto it = record.find(name);
  if (it == record.end() || it->is_null()) return nullptr;
  return &*it;
}

std::optional<std::string> ScalarText(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer() || value.is_number_unsigned() || value.is_number_float() ||
      value.is_boolean()) {
    return value.dump();
  }
  return std::nullopt;
}

}  // namespace

Result<Sample> ValidateSample(const json& record) {
  if (!record.is_object()) {
    return MakeError(ErrorCode::kMalformedLine, "record is not an object");
  }
  Sample sample;

  const json* uid = Field(record, "uid");
  if (uid == nullptr) return MakeError(ErrorCode::kMissingField, "uid");
  std::optional<std::string> uid_text = ScalarText(*uid);
  if (!uid_text || uid_text->empty() || uid->is_boolean()) {
    return MakeError(ErrorCode::kMissingField, "uid");
  }
  sample.uid = std::move(*uid_text);

  const json* url = Field(record, "url");
  if (url == nullptr || !url->is_string() || url->get_ref<const std::string&>().empty()) {
    return MakeError(ErrorCode::kMissingField, "url");
  }
  sample.url = url->get<std::string>();
  if (auto parsed = ParseUrl(sample.url); !parsed.ok()) return parsed.error();

  if (const json* caption = Field(record, "caption")) {
    if (!caption->is_string()) return MakeError(ErrorCode::kInvalidField, "caption");
    sample.caption = caption->get<std::string>();
  }
  if (const json* ocr = Field(record, "ocr_text")) {
    if (!ocr->is_string()) return MakeError(ErrorCode::kInvalidField, "ocr_text");
    sample.ocr_text = ocr->get<std::string>();
  }
  if (const json* metadata = Field(record, "metadata")) {
    if (!metadata->is_object()) return MakeError(ErrorCode::kInvalidField, "metadata");
    std::map<std::string, std::string> map;
    for (const auto& [key, value] : metadata->items()) {
      if (value.is_null()) continue;
      std::optional<std::string> text = ScalarText(value);
      if (!text) return MakeError(ErrorCode::kInvalidField, "metadata." + key);
      map.emplace(key, std::move(*text));
    }
    sample.metadata = std::move(map);
  }
  if (const json* exif = Field(record, "exif_raw")) {
    if (!exif->is_string()) return MakeError(ErrorCode::kInvalidField, "exif_raw");
    auto bytes = Base64Decode(exif->get_ref<const std::string&>());
    if (!bytes) return MakeError(ErrorCode::kInvalidField, "exif_raw is not base64");
    sample.exif_raw = std::move(*bytes);
  }
  return sample;
}

json SampleToJson(const Sample& sample) {
  json record = {{"uid", sample.uid}, {"url", sample.url}, {"caption", sample.caption}};
  if (sample.ocr_text) record["ocr_text"] = *sample.ocr_text;
  if (sample.metadata) record["metadata"] = *sample.metadata;
  if (sample.exif_raw) record["exif_raw"] = Base64Encode(*sample.exif_raw);
  return record;
}

std::string SerializeSample(const Sample& sample) {
  // Replace invalid UTF-8 rather than throwing; validated samples come from
  // JSON so this only matters for hand-built ones.
  return SampleToJson(sample).dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace consent_audit
