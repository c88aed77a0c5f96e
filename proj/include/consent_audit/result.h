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

#ifndef CONSENT_AUDIT_RESULT_H_
#define CONSENT_AUDIT_RESULT_H_

#include <cassert>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace consent_audit {

enum class ErrorCode {
  kMissingField,
  kInvalidUrl,
  kInvalidField,
  kDuplicateUid,
  kMalformedLine,
  kIoError,
  kTruncatedSegment,
  kMalformedIfd,
  kNoHost,
  kNoAgents,
  kUnknownEnumValue,
  kDuplicateDomain,
  kMissingWeight,
  kEmptyCounts,
  kDegenerateLabels,
  kInvalidLevel,
  kInvalidArgument,
  kInvalidPattern,
  kCacheWriteError,
  kConfigError,
};

std::string_view ErrorCodeName(ErrorCode code);

struct Error {
  ErrorCode code;
  std::string message;

  std::string ToString() const;
};

// Value-or-error. Errors are plain data; nothing in the library throws for
// malformed input.
template <typename T>
class [[nodiscard]] Result {
 public:
  Result(T value) : storage_(std::move(value)) {}      // NOLINT
  Result(Error error) : storage_(std::move(error)) {}  // NOLINT

  bool ok() const { return std::holds_alternative<T>(storage_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    assert(ok());
    return std::get<T>(storage_);
  }
  T& value() & {
    assert(ok());
    return std::get<T>(storage_);
  }
  T&& value() && {
    assert(ok());
    return std::get<T>(std::move(storage_));
  }
  const Error& error() const {
    assert(!ok());
    return std::get<Error>(storage_);
  }

  const T& operator*() const& { return value(); }
  T& operator*() & { return value(); }
  const T* operator->() const { return &value(); }
  T* operator->() { return &value(); }

 private:
  std::variant<T, Error> storage_;
};

inline Error MakeError(ErrorCode code, std::string message) {
  return Error{code, std::move(message)};
}

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_RESULT_H_
