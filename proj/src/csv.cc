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

#include "consent_audit/csv.h"

#include <fmt/format.h>

#include "consent_audit/strings.h"

namespace consent_audit {
namespace {

// Splits `record` into fields. Returns false on a quote left open.
bool SplitRecord(std::string_view record, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool quoted = false;
  bool field_started_quoted = false;
  for (std::size_t i = 0; i < record.size(); ++i) {
    char c = record[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < record.size() && record[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty() && !field_started_quoted) {
      quoted = true;
      field_started_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_started_quoted = false;
    } else {
      field.push_back(c);
    }
  }
  if (quoted) return false;
  fields.push_back(std::move(field));
  return true;
}

bool HasOpenQuote(std::string_view text) {
  bool open = false;
  for (char c : text) {
    if (c == '"') open = !open;
  }
  return open;
}

}  // namespace

bool CsvReader::ReadPhysicalLine(std::string& line) {
  if (!std::getline(in_, line)) return false;
  ++line_no_;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

Result<std::vector<std::string>> CsvReader::ReadHeader() {
  std::string line;
  while (ReadPhysicalLine(line)) {
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    if (!SplitRecord(line, fields)) {
      return MakeError(ErrorCode::kMalformedLine, fmt::format("line {}: bad header", line_no_));
    }
    for (auto& f : fields) f = std::string(TrimAscii(f));
    header_ = fields;
    columns_.clear();
    for (std::size_t i = 0; i < header_.size(); ++i) columns_.emplace(header_[i], i);
    return fields;
  }
  return MakeError(ErrorCode::kMalformedLine, "missing CSV header");
}

std::optional<Result<std::vector<std::string>>> CsvReader::NextRow() {
  std::string record;
  do {
    if (!ReadPhysicalLine(record)) return std::nullopt;
  } while (record.empty());
  record_line_ = line_no_;
  std::string line;
  while (HasOpenQuote(record)) {
    if (!ReadPhysicalLine(line)) {
      return Result<std::vector<std::string>>(MakeError(
          ErrorCode::kMalformedLine, fmt::format("line {}: unterminated quote", record_line_)));
    }
    record.push_back('\n');
    record += line;
  }
  std::vector<std::string> fields;
  if (!SplitRecord(record, fields)) {
    return Result<std::vector<std::string>>(MakeError(
        ErrorCode::kMalformedLine, fmt::format("line {}: unterminated quote", record_line_)));
  }
  return Result<std::vector<std::string>>(std::move(fields));
}

std::optional<std::size_t> CsvReader::Column(std::string_view name) const {
  auto it = columns_.find(std::string(name));
  if (it == columns_.end()) return std::nullopt;
  return it->second;
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string CsvRow(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += CsvEscape(fields[i]);
  }
  return out;
}

}  // namespace consent_audit
