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

// RFC 4180 style CSV: comma separated, double-quote escaping, quoted fields
// may span lines. Lines starting with '#' before the header are provenance
// comments and are skipped.

#ifndef CONSENT_AUDIT_CSV_H_
#define CONSENT_AUDIT_CSV_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "consent_audit/result.h"

namespace consent_audit {

class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Reads the header row. Must be called once before NextRow().
  Result<std::vector<std::string>> ReadHeader();

  // Next record, or nullopt at end of input. A record with an unterminated
  // quote at EOF is reported as MalformedLine.
  std::optional<Result<std::vector<std::string>>> NextRow();

  // Physical line on which the last returned record started (1-based).
  std::size_t record_line() const { return record_line_; }

  const std::vector<std::string>& header() const { return header_; }
  // Column index by name, or nullopt.
  std::optional<std::size_t> Column(std::string_view name) const;

 private:
  bool ReadPhysicalLine(std::string& line);

  std::istream& in_;
  std::vector<std::string> header_;
  std::unordered_map<std::string, std::size_t> columns_;
  std::size_t line_no_ = 0;
  std::size_t record_line_ = 0;
};

std::string CsvEscape(std::string_view field);
std::string CsvRow(const std::vector<std::string>& fields);

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_CSV_H_
