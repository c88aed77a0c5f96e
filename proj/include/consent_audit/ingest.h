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

// Streaming record reader. Pull-based: each Next() call reads exactly one
// record from the underlying stream, so memory stays flat regardless of file
// size (apart from the uid index, 8-16 bytes per record).

#ifndef CONSENT_AUDIT_INGEST_H_
#define CONSENT_AUDIT_INGEST_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "consent_audit/csv.h"
#include "consent_audit/result.h"
#include "consent_audit/types.h"

namespace consent_audit {

enum class InputFormat { kNdRecords, kCsv };

std::optional<InputFormat> ParseInputFormat(std::string_view name);

struct StreamStats {
  std::uint64_t total_records = 0;
  std::uint64_t valid = 0;
  std::map<ErrorCode, std::uint64_t> rejected;

  std::uint64_t rejected_total() const;
  bool operator==(const StreamStats&) const = default;
};

struct Rejection {
  std::size_t line_no = 0;
  Error error;
};

using RecordOutcome = std::variant<Sample, Rejection>;

// Set of uid fingerprints (64-bit hashes). Two distinct uids collide with
// probability ~n^2/2^65, i.e. ~3e-8 at 10^6 records.
//
// The top 16 bits of a fingerprint pick one of 65536 shards; each shard is a
// sorted array of the remaining 48 bits packed into 6 bytes. About 7 bytes
// per uid plus a fixed 1 MiB directory, and growth copies one shard at a
// time, so there is no whole-table resize peak. Suited to streams of up to
// ~10^7 records; insertion shifts the tail of one shard.
class UidIndex {
 public:
  // Returns false if the uid was already present.
  bool Insert(std::string_view uid);
  std::size_t size() const { return size_; }

 private:
  static constexpr int kRemainderBits = 48;
  static constexpr std::size_t kShards = std::size_t{1} << (64 - kRemainderBits);
  static constexpr std::size_t kEntryBytes = kRemainderBits / 8;

  struct Shard {
    std::unique_ptr<std::uint8_t[]> data;
    std::uint32_t size = 0;
    std::uint32_t capacity = 0;
  };

  std::unique_ptr<Shard[]> shards_;  // allocated on first insert
  std::size_t size_ = 0;
};

class SampleReader {
 public:
  struct Options {
    bool reject_duplicate_uids = true;
  };

  // IoError when the file cannot be opened; CSV header problems surface as
  // a MalformedLine error here too.
  static Result<std::unique_ptr<SampleReader>> Open(const std::filesystem::path& path,
                                                    InputFormat format);
  static Result<std::unique_ptr<SampleReader>> Open(const std::filesystem::path& path,
                                                    InputFormat format, Options options);
  static Result<std::unique_ptr<SampleReader>> FromStream(std::istream& in, InputFormat format,
                                                          Options options);

  // Outcome of the next record in input order, or nullopt at end of stream.
  std::optional<RecordOutcome> Next();

  const StreamStats& stats() const { return stats_; }
  // Set if the underlying stream failed mid-read (not at EOF).
  const std::optional<Error>& io_error() const { return io_error_; }

 private:
  SampleReader(std::unique_ptr<std::istream> owned, std::istream& in, InputFormat format,
               Options options);

  std::optional<RecordOutcome> NextNdRecord();
  std::optional<RecordOutcome> NextCsvRecord();
  RecordOutcome Admit(Result<Sample> sample, std::size_t line_no);

  std::unique_ptr<std::istream> owned_;
  std::istream& in_;
  InputFormat format_;
  Options options_;
  std::optional<CsvReader> csv_;
  std::size_t line_no_ = 0;
  std::string line_;
  UidIndex uids_;
  StreamStats stats_;
  std::optional<Error> io_error_;
};

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_INGEST_H_
