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

#include "consent_audit/types.h"

#include <fmt/format.h>

#include "consent_audit/result.h"

namespace consent_audit {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kInvalidUrl: return "InvalidUrl";
    case ErrorCode::kInvalidField: return "InvalidField";
    case ErrorCode::kDuplicateUid: return "DuplicateUid";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kTruncatedSegment: return "TruncatedSegment";
    case ErrorCode::kMalformedIfd: return "MalformedIfd";
    case ErrorCode::kNoHost: return "NoHost";
    case ErrorCode::kNoAgents: return "NoAgents";
    case ErrorCode::kUnknownEnumValue: return "UnknownEnumValue";
    case ErrorCode::kDuplicateDomain: return "DuplicateDomain";
    case ErrorCode::kMissingWeight: return "MissingWeight";
    case ErrorCode::kEmptyCounts: return "EmptyCounts";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kInvalidLevel: return "InvalidLevel";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidPattern: return "InvalidPattern";
    case ErrorCode::kCacheWriteError: return "CacheWriteError";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

std::string Error::ToString() const {
  if (message.empty()) return std::string(ErrorCodeName(code));
  return fmt::format("{}: {}", ErrorCodeName(code), message);
}

std::string_view ChannelName(Channel channel) {
  switch (channel) {
    case Channel::kCaption: return "caption";
    case Channel::kOcr: return "ocr";
    case Channel::kExif: return "exif";
  }
  return "";
}

std::string_view MatchCategoryName(MatchCategory category) {
  switch (category) {
    case MatchCategory::kCopyrightGeneral: return "CopyrightGeneral";
    case MatchCategory::kCopyrightSymbol: return "CopyrightSymbol";
    case MatchCategory::kCreativeCommons: return "CreativeCommons";
    case MatchCategory::kExifCopyright: return "ExifCopyright";
  }
  return "";
}

std::optional<MatchCategory> ParseMatchCategory(std::string_view name) {
  for (auto c : {MatchCategory::kCopyrightGeneral, MatchCategory::kCopyrightSymbol,
                 MatchCategory::kCreativeCommons, MatchCategory::kExifCopyright}) {
    if (MatchCategoryName(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kAllDisallowed: return "AllDisallowed";
    case Verdict::kSomeDisallowed: return "SomeDisallowed";
    case Verdict::kNoneDisallowed: return "NoneDisallowed";
    case Verdict::kNotMentioned: return "NotMentioned";
  }
  return "";
}

}  // namespace consent_audit
