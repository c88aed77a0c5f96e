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

#include "consent_audit/ingest.h"

#include <fmt/format.h>

#include <cstring>
#include <fstream>
#include <functional>

#include "consent_audit/sample.h"
#include "json.hpp"

namespace consent_audit {
namespace {

std::uint64_t Fingerprint(std::string_view uid) {
  std::uint64_t h = std::hash<std::string_view>{}(uid);
  // splitmix64 finalizer; libstdc++'s string hash has weak low bits.
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h == 0 ? 1 : h;
}

const char* const kCsvColumns[] = {"uid", "url", "caption", "ocr_text", "metadata", "exif_raw"};

}  // namespace

std::optional<InputFormat> ParseInputFormat(std::string_view name) {
  if (name == "ndrecords" || name == "jsonl" || name == "ndjson") return InputFormat::kNdRecords;
  if (name == "csv") return InputFormat::kCsv;
  return std::nullopt;
}

std::uint64_t StreamStats::rejected_total() const {
  std::uint64_t total = 0;
  for (const auto& [code, count] : rejected) total += count;
  return total;
}

bool UidIndex::Insert(std::string_view uid) {
  if (!shards_) shards_ = std::make_unique<Shard[]>(kShards);
  std::uint64_t fp = Fingerprint(uid);
  Shard& shard = shards_[fp >> kRemainderBits];
  std::uint64_t remainder = fp & ((std::uint64_t{1} << kRemainderBits) - 1);

  auto load = [&](std::uint32_t i) {
    const std::uint8_t* bytes = shard.data.get() + std::size_t{i} * kEntryBytes;
    std::uint64_t value = 0;
    for (std::size_t b = 0; b < kEntryBytes; ++b) value = (value << 8) | bytes[b];
    return value;
  };
  std::uint32_t lo = 0;
  std::uint32_t hi = shard.size;
  while (lo < hi) {
    std::uint32_t mid = lo + (hi - lo) / 2;
    if (load(mid) < remainder) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < shard.size && load(lo) == remainder) return false;

  if (shard.size == shard.capacity) {
    std::uint32_t capacity = shard.capacity + std::max<std::uint32_t>(4, shard.capacity / 8);
    auto grown =
        std::make_unique_for_overwrite<std::uint8_t[]>(std::size_t{capacity} * kEntryBytes);
    if (shard.size > 0) {
      std::memcpy(grown.get(), shard.data.get(), std::size_t{shard.size} * kEntryBytes);
    }
    shard.data = std::move(grown);
    shard.capacity = capacity;
  }
  std::uint8_t* at = shard.data.get() + std::size_t{lo} * kEntryBytes;
  std::memmove(at + kEntryBytes, at, std::size_t{shard.size - lo} * kEntryBytes);
  for (std::size_t b = 0; b < kEntryBytes; ++b) {
    at[b] = static_cast<std::uint8_t>(remainder >> (8 * (kEntryBytes - 1 - b)));
  }
  ++shard.size;
  ++size_;
  return true;
}

SampleReader::SampleReader(std::unique_ptr<std::istream> owned, std::istream& in,
                           InputFormat format, Options options)
    : owned_(std::move(owned)), in_(in), format_(format), options_(options) {}

Result<std::unique_ptr<SampleReader>> SampleReader::Open(const std::filesystem::path& path,
                                                         InputFormat format) {
  return Open(path, format, Options{});
}

Result<std::unique_ptr<SampleReader>> SampleReader::Open(const std::filesystem::path& path,
                                                         InputFormat format, Options options) {
  auto file = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*file) return MakeError(ErrorCode::kIoError, "cannot open " + path.string());
  std::istream& ref = *file;
  std::unique_ptr<SampleReader> reader(new SampleReader(std::move(file), ref, format, options));
  if (format == InputFormat::kCsv) {
    reader->csv_.emplace(ref);
    if (auto header = reader->csv_->ReadHeader(); !header.ok()) return header.error();
  }
  return reader;
}

Result<std::unique_ptr<SampleReader>> SampleReader::FromStream(std::istream& in, InputFormat format,
                                                               Options options) {
  std::unique_ptr<SampleReader> reader(new SampleReader(nullptr, in, format, options));
  if (format == InputFormat::kCsv) {
    reader->csv_.emplace(in);
    if (auto header = reader->csv_->ReadHeader(); !header.ok()) return header.error();
  }
  return reader;
}

std::optional<RecordOutcome> SampleReader::Next() {
  std::optional<RecordOutcome> outcome =
      format_ == InputFormat::kCsv ? NextCsvRecord() : NextNdRecord();
  if (!outcome && in_.bad() && !io_error_) {
    io_error_ = MakeError(ErrorCode::kIoError, "read failed");
  }
  return outcome;
}

RecordOutcome SampleReader::Admit(Result<Sample> sample, std::size_t line_no) {
  ++stats_.total_records;
  if (sample.ok() && options_.reject_duplicate_uids && !uids_.Insert(sample->uid)) {
    sample = MakeError(ErrorCode::kDuplicateUid, sample->uid);
  }
  if (!sample.ok()) {
    ++stats_.rejected[sample.error().code];
    return Rejection{line_no, sample.error()};
  }
  ++stats_.valid;
  return std::move(sample).value();
}

std::optional<RecordOutcome> SampleReader::NextNdRecord() {
  while (std::getline(in_, line_)) {
    ++line_no_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    if (line_.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json record = nlohmann::json::parse(line_, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded()) {
      return Admit(MakeError(ErrorCode::kMalformedLine, fmt::format("line {}", line_no_)),
                   line_no_);
    }
    return Admit(ValidateSample(record), line_no_);
  }
  return std::nullopt;
}

std::optional<RecordOutcome> SampleReader::NextCsvRecord() {
  auto row = csv_->NextRow();
  if (!row) return std::nullopt;
  std::size_t line_no = csv_->record_line();
  if (!row->ok()) return Admit(row->error(), line_no);
  const std::vector<std::string>& fields = row->value();
  if (fields.size() != csv_->header().size()) {
    return Admit(MakeError(ErrorCode::kMalformedLine,
                           fmt::format("line {}: {} fields, header has {}", line_no, fields.size(),
                                       csv_->header().size())),
                 line_no);
  }
  nlohmann::json record = nlohmann::json::object();
  for (const char* column : kCsvColumns) {
    auto index = csv_->Column(column);
    if (!index) continue;
    const std::string& value = fields[*index];
    std::string_view name = column;
    if (name == "metadata") {
      if (value.empty()) continue;
      nlohmann::json metadata = nlohmann::json::parse(value, nullptr, false);
      if (metadata.is_discarded()) {
        return Admit(MakeError(ErrorCode::kInvalidField, "metadata is not JSON"), line_no);
      }
      record["metadata"] = std::move(metadata);
    } else if (name == "ocr_text" || name == "exif_raw") {
      if (!value.empty()) record[column] = value;
    } else {
      record[column] = value;
    }
  }
  if (record.contains("uid") && record["uid"] == "") record.erase("uid");
  if (record.contains("url") && record["url"] == "") record.erase("url");
  return Admit(ValidateSample(record), line_no);
}

}  // namespace consent_audit
