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

// Scan orchestration and table rendering. Every emitted file starts with a
// provenance comment: tool version, input digests, cache snapshot.

#ifndef CONSENT_AUDIT_REPORT_H_
#define CONSENT_AUDIT_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "consent_audit/domains.h"
#include "consent_audit/ingest.h"
#include "consent_audit/metrics.h"
#include "consent_audit/notice_scan.h"
#include "consent_audit/public_suffix.h"
#include "consent_audit/robots_fetch.h"
#include "consent_audit/tally.h"

namespace consent_audit {

struct Provenance {
  std::string version = CONSENT_AUDIT_VERSION;
  std::vector<std::pair<std::string, std::string>> inputs;  // name, sha256
  std::string cache_snapshot;                               // empty: none

  // Adds `path` under its file name. IoError if unreadable.
  std::optional<Error> AddInput(const std::filesystem::path& path);
};

enum class CommentStyle { kHash, kHtml };

// "# consent-audit <version>" style header lines, one per fact.
void WriteProvenance(std::ostream& out, const Provenance& provenance, CommentStyle style);

struct ScanCounts {
  std::uint64_t processed = 0;
  std::uint64_t caption = 0;
  std::uint64_t ocr = 0;
  std::uint64_t exif = 0;
  std::uint64_t any = 0;
  std::uint64_t exif_parse_errors = 0;

  void Merge(const ScanCounts& other);
  bool operator==(const ScanCounts&) const = default;
};

struct ScanOptions {
  int jobs = 1;
  const SuffixRules* suffix_rules = nullptr;  // set to count domains
  std::size_t batch_size = 512;
};

struct ScanOutcome {
  ScanCounts counts;
  StreamStats stats;
  DomainCounter domains;
  std::optional<Error> io_error;
};

using RejectSink = std::function<void(const Rejection&)>;

// Drains `reader`, scanning caption, OCR and EXIF channels on `jobs`
// workers. Rejections reach `on_reject` in input order on the calling thread.
ScanOutcome RunScan(SampleReader& reader, const PatternSet& patterns, const ScanOptions& options,
                    const RejectSink& on_reject = nullptr);

// Population for percentages: processed samples unless a released total is
// given.
struct Denominator {
  std::uint64_t value = 0;
  std::string label;  // "processed" or "released"
};
Denominator ChooseDenominator(const ScanCounts& counts, std::optional<std::uint64_t> released);

// Rows: Caption, OCR, EXIF Metadata, Caption ∪ OCR ∪ EXIF.
void WriteTableThreeCsv(std::ostream& out, const ScanCounts& counts, const Denominator& denom);
void WriteTableThreeMarkdown(std::ostream& out, const ScanCounts& counts, const Denominator& denom);

struct TableFiveOptions {
  double highlight_threshold = 0.8;  // rows with all-disallowed rate >= this are highlighted
};
void WriteTableFiveCsv(std::ostream& out, const ObservationTable& table,
                       const TableFiveOptions& options = {});
void WriteTableFiveMarkdown(std::ostream& out, const ObservationTable& table,
                            const TableFiveOptions& options = {});

// "1,126,876".
std::string FormatCount(std::uint64_t value);

struct RobotsCensus {
  std::map<std::string, RobotsDoc> docs;  // hosts with a non-empty robots.txt
  std::uint64_t attempted = 0;
  std::uint64_t success = 0;
  std::uint64_t empty = 0;
  std::uint64_t unreachable = 0;
  std::string snapshot;  // newest fetched_at used
};

// Docs for `hosts` from the cache alone (the offline path).
Result<RobotsCensus> CensusFromCache(const RobotsCache& cache,
                                     const std::vector<std::string>& hosts);
RobotsCensus CensusFromFetches(const std::vector<FetchResult>& results);

struct ScoreTable {
  std::vector<std::string> uids;
  std::vector<double> scores;
  std::vector<bool> labels;
};
// uid,score,label with label in {0,1,true,false}.
Result<ScoreTable> LoadScores(const std::filesystem::path& path);

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartialFailure = 1;
inline constexpr int kExitUsage = 2;

struct PipelineConfig {
  std::filesystem::path input;
  InputFormat format = InputFormat::kNdRecords;
  std::string patterns = "builtin";
  std::string agents = "builtin";
  std::filesystem::path annotations;  // optional
  std::filesystem::path cache_dir;
  bool offline = true;
  std::size_t top_k = 50;
  int jobs = 1;
  std::optional<std::uint64_t> released_total;
  AgentMatch agent_match = AgentMatch::kExact;
  std::filesystem::path scores;  // optional
  double threshold = 0.5;
  double ci_level = 0.95;
  CiMethod ci_method = CiMethod::kWald;
  std::filesystem::path public_suffix_list;  // empty: bundled snapshot
  FetchPolicy fetch;
};

// Parses the JSON config; relative paths resolve against `base_dir`.
// ConfigError for unknown keys, bad types, missing inputs or offline mode
// without a cache.
Result<PipelineConfig> ParsePipelineConfig(std::string_view json_text,
                                           const std::filesystem::path& base_dir);
Result<PipelineConfig> LoadPipelineConfig(const std::filesystem::path& path);

struct StageStatus {
  std::string name;
  std::string status;  // ok, failed, skipped
  std::string detail;
};

struct PipelineResult {
  std::vector<StageStatus> stages;
  int exit_code = kExitOk;
};

// ingest+scan+domains -> robots -> tos -> metrics; writes domains.csv,
// full_domains.csv, table3.{csv,md}, table5.{csv,md}, tos_report.{csv,md},
// metrics.json, rejects.tsv and manifest.json into `out_dir`.
PipelineResult RunPipeline(const PipelineConfig& config, const std::filesystem::path& out_dir,
                           HttpTransport* transport = nullptr);

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_REPORT_H_
