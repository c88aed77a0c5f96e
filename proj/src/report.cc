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

#include "consent_audit/report.h"

#include <fmt/format.h>

#include <charconv>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "consent_audit/codec.h"
#include "consent_audit/csv.h"
#include "consent_audit/exif.h"
#include "consent_audit/robots.h"
#include "consent_audit/strings.h"
#include "consent_audit/tos.h"
#include "json.hpp"

namespace consent_audit {
namespace {

using nlohmann::json;

struct Worker {
  ScanCounts counts;
  std::optional<DomainTracker> tracker;
};

void ScanOne(const Sample& sample, const PatternSet& patterns, Worker& worker) {
  ConsentFlags flags = ScanSampleText(sample, patterns);
  ExifFinding exif = FindExifCopyright(sample);
  ScanCounts& c = worker.counts;
  ++c.processed;
  bool exif_hit = exif.copyright.has_value();
  if (flags.caption_hit) ++c.caption;
  if (flags.ocr_hit) ++c.ocr;
  if (exif_hit) ++c.exif;
  if (flags.caption_hit || flags.ocr_hit || exif_hit) ++c.any;
  if (exif.error) ++c.exif_parse_errors;
  if (worker.tracker) (void)worker.tracker->Add(sample);
}

// Single-producer batch queue with a bound on queued batches.
class BatchQueue {
 public:
  explicit BatchQueue(std::size_t capacity) : capacity_(capacity) {}

  void Push(std::vector<Sample> batch) {
    std::unique_lock lock(mu_);
    not_full_.wait(lock, [&] { return queue_.size() < capacity_; });
    queue_.push_back(std::move(batch));
    not_empty_.notify_one();
  }

  void Close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    not_empty_.notify_all();
  }

  std::optional<std::vector<Sample>> Pop() {
    std::unique_lock lock(mu_);
    not_empty_.wait(lock, [&] { return !queue_.empty() || closed_; });
    if (queue_.empty()) return std::nullopt;
    std::vector<Sample> batch = std::move(queue_.front());
    queue_.pop_front();
    not_full_.notify_one();
    return batch;
  }

 private:
  std::size_t capacity_;
  std::mutex mu_;
  std::condition_variable not_empty_;
  std::condition_variable not_full_;
  std::deque<std::vector<Sample>> queue_;
  bool closed_ = false;
};

std::string Percent(std::uint64_t count, std::uint64_t total, int decimals) {
  double value = total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(total);
  return fmt::format("{:.{}f}%", value, decimals);
}

std::string Share(std::uint64_t count, std::uint64_t total) {
  double value = total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
  return fmt::format("{:.17g}", value);
}

const std::pair<const char*, std::uint64_t ScanCounts::*> kTableThreeRows[] = {
    {"Caption", &ScanCounts::caption},
    {"OCR", &ScanCounts::ocr},
    {"EXIF Metadata", &ScanCounts::exif},
    {"Caption \xE2\x88\xAA OCR \xE2\x88\xAA EXIF", &ScanCounts::any},
};

bool Highlighted(const ObservationRow& row, const TableFiveOptions& options) {
  return row.observed > 0 && row.AllDisallowedRate() >= options.highlight_threshold;
}

}  // namespace

std::optional<Error> Provenance::AddInput(const std::filesystem::path& path) {
  auto digest = Sha256File(path);
  if (!digest.ok()) return digest.error();
  inputs.emplace_back(path.filename().string(), *digest);
  return std::nullopt;
}

void WriteProvenance(std::ostream& out, const Provenance& p, CommentStyle style) {
  std::vector<std::string> lines;
  lines.push_back(fmt::format("consent-audit {}", p.version));
  for (const auto& [name, digest] : p.inputs) {
    lines.push_back(fmt::format("input {} sha256={}", name, digest));
  }
  lines.push_back(
      fmt::format("cache snapshot {}", p.cache_snapshot.empty() ? "none" : p.cache_snapshot));
  for (const auto& line : lines) {
    if (style == CommentStyle::kHash) {
      out << "# " << line << '\n';
    } else {
      out << "<!-- " << line << " -->\n";
    }
  }
}

void ScanCounts::Merge(const ScanCounts& o) {
  processed += o.processed;
  caption += o.caption;
  ocr += o.ocr;
  exif += o.exif;
  any += o.any;
  exif_parse_errors += o.exif_parse_errors;
}

ScanOutcome RunScan(SampleReader& reader, const PatternSet& patterns, const ScanOptions& options,
                    const RejectSink& on_reject) {
  auto make_worker = [&] {
    Worker worker;
    if (options.suffix_rules) worker.tracker.emplace(*options.suffix_rules);
    return worker;
  };
  auto handle_reject = [&](const Rejection& rejection) {
    if (on_reject) on_reject(rejection);
  };

  ScanOutcome outcome;
  std::vector<Worker> workers;
  if (options.jobs <= 1) {
    workers.push_back(make_worker());
    while (auto next = reader.Next()) {
      if (auto* sample = std::get_if<Sample>(&*next)) {
        ScanOne(*sample, patterns, workers[0]);
      } else {
        handle_reject(std::get<Rejection>(*next));
      }
    }
  } else {
    std::size_t jobs = static_cast<std::size_t>(options.jobs);
    for (std::size_t i = 0; i < jobs; ++i) workers.push_back(make_worker());
    BatchQueue queue(2 * jobs);
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < jobs; ++i) {
      threads.emplace_back([&, i] {
        while (auto batch = queue.Pop()) {
          for (const Sample& sample : *batch) ScanOne(sample, patterns, workers[i]);
        }
      });
    }
    std::vector<Sample> batch;
    while (auto next = reader.Next()) {
      if (auto* sample = std::get_if<Sample>(&*next)) {
        batch.push_back(std::move(*sample));
        if (batch.size() >= options.batch_size) {
          queue.Push(std::move(batch));
          batch = {};
        }
      } else {
        handle_reject(std::get<Rejection>(*next));
      }
    }
    if (!batch.empty()) queue.Push(std::move(batch));
    queue.Close();
    for (auto& thread : threads) thread.join();
  }

  for (const Worker& worker : workers) {
    outcome.counts.Merge(worker.counts);
    if (worker.tracker) outcome.domains.Merge(worker.tracker->counter());
  }
  outcome.stats = reader.stats();
  outcome.io_error = reader.io_error();
  return outcome;
}

Denominator ChooseDenominator(const ScanCounts& counts, std::optional<std::uint64_t> released) {
  if (released) return {*released, "released"};
  return {counts.processed, "processed"};
}

void WriteTableThreeCsv(std::ostream& out, const ScanCounts& counts, const Denominator& denom) {
  out << "measure,count,denominator,denominator_kind,share\n";
  for (const auto& [name, field] : kTableThreeRows) {
    out << CsvRow({name, std::to_string(counts.*field), std::to_string(denom.value), denom.label,
                   Share(counts.*field, denom.value)})
        << '\n';
  }
}

void WriteTableThreeMarkdown(std::ostream& out, const ScanCounts& counts,
                             const Denominator& denom) {
  out << fmt::format("| Measure | Count (% of {} {} samples) |\n", FormatCount(denom.value),
                     denom.label);
  out << "|---|---:|\n";
  for (const auto& [name, field] : kTableThreeRows) {
    out << fmt::format("| {} | {} ({}) |\n", name, FormatCount(counts.*field),
                       Percent(counts.*field, denom.value, 2));
  }
}

std::string FormatCount(std::uint64_t value) {
  std::string digits = std::to_string(value);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

void WriteTableFiveCsv(std::ostream& out, const ObservationTable& table,
                       const TableFiveOptions& options) {
  out << fmt::format("# attempted_full_domains {}\n", table.attempted_domains);
  out << fmt::format("# robots_full_domains {}\n", table.robots_domains);
  out << fmt::format("# samples_observed {}\n", table.all_agents.observed);
  out << fmt::format("# unattributed_samples {}\n", table.unattributed_samples);
  out << fmt::format("# no_agent_samples {}\n", table.no_agent_samples);
  out << "agent,ai_purpose,highlighted,observed,all_disallowed,all_disallowed_share,"
         "some_disallowed,some_disallowed_share,none_disallowed,none_disallowed_share\n";
  auto write = [&](const ObservationRow& row, bool all_agents) {
    out << CsvRow({row.agent, row.ai_purpose ? "1" : "0",
                   !all_agents && Highlighted(row, options) ? "1" : "0",
                   std::to_string(row.observed), std::to_string(row.all_disallowed),
                   Share(row.all_disallowed, row.observed), std::to_string(row.some_disallowed),
                   Share(row.some_disallowed, row.observed), std::to_string(row.none_disallowed),
                   Share(row.none_disallowed, row.observed)})
        << '\n';
  };
  write(table.all_agents, true);
  for (const auto& row : table.rows) write(row, false);
}

void WriteTableFiveMarkdown(std::ostream& out, const ObservationTable& table,
                            const TableFiveOptions& options) {
  out << fmt::format(
      "{} full domains attempted, {} with a robots.txt, {} samples observed. "
      "Unattributed samples (no robots.txt): {}. Samples whose robots.txt names no agent: {}.\n\n",
      FormatCount(table.attempted_domains), FormatCount(table.robots_domains),
      FormatCount(table.all_agents.observed), FormatCount(table.unattributed_samples),
      FormatCount(table.no_agent_samples));
  out << fmt::format(
      "Percentages are of each row's observed samples. Bold rows have an "
      "All Disallowed rate of at least {:.0f}%; (AI) marks AI-purposed agents.\n\n",
      options.highlight_threshold * 100.0);
  out << "| Agent | Observed | All Disallowed | % of observed | Some Disallowed | % of observed "
         "| None Disallowed | % of observed |\n";
  out << "|---|---:|---:|---:|---:|---:|---:|---:|\n";
  auto write = [&](const ObservationRow& row, bool all_agents) {
    std::string name = row.agent;
    if (row.ai_purpose) name += " (AI)";
    if (!all_agents && Highlighted(row, options)) name = "**" + name + "**";
    out << fmt::format(
        "| {} | {} | {} | {} | {} | {} | {} | {} |\n", name, FormatCount(row.observed),
        FormatCount(row.all_disallowed), Percent(row.all_disallowed, row.observed, 1),
        FormatCount(row.some_disallowed), Percent(row.some_disallowed, row.observed, 1),
        FormatCount(row.none_disallowed), Percent(row.none_disallowed, row.observed, 1));
  };
  write(table.all_agents, true);
  for (const auto& row : table.rows) write(row, false);
}

Result<RobotsCensus> CensusFromCache(const RobotsCache& cache,
                                     const std::vector<std::string>& hosts) {
  auto index = cache.LoadIndex();
  if (!index.ok()) return index.error();
  RobotsCensus census;
  for (const std::string& host : hosts) {
    ++census.attempted;
    auto it = index->find(host);
    if (it == index->end()) {
      ++census.unreachable;
      continue;
    }
    const CacheEntry& entry = it->second;
    census.snapshot = std::max(census.snapshot, entry.fetched_at);
    switch (entry.status) {
      case FetchStatus::kSuccess: {
        auto body = cache.ReadBody(entry);
        if (!body.ok()) return body.error();
        census.docs.emplace(host, ParseRobots(*body));
        ++census.success;
        break;
      }
      case FetchStatus::kEmpty: ++census.empty; break;
      case FetchStatus::kUnreachable: ++census.unreachable; break;
    }
  }
  return census;
}

RobotsCensus CensusFromFetches(const std::vector<FetchResult>& results) {
  RobotsCensus census;
  for (const FetchResult& result : results) {
    ++census.attempted;
    census.snapshot = std::max(census.snapshot, result.fetched_at);
    switch (result.status) {
      case FetchStatus::kSuccess:
        census.docs.emplace(result.host, ParseRobots(result.body));
        ++census.success;
        break;
      case FetchStatus::kEmpty: ++census.empty; break;
      case FetchStatus::kUnreachable: ++census.unreachable; break;
    }
  }
  return census;
}

Result<ScoreTable> LoadScores(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return MakeError(ErrorCode::kIoError, "cannot read " + path.string());
  CsvReader csv(in);
  if (auto header = csv.ReadHeader(); !header.ok()) return header.error();
  auto uid = csv.Column("uid");
  auto score = csv.Column("score");
  auto label = csv.Column("label");
  if (!score || !label) {
    return MakeError(ErrorCode::kMissingField, path.string() + ": need score and label columns");
  }
  ScoreTable table;
  while (auto row = csv.NextRow()) {
    if (!row->ok()) return row->error();
    const auto& fields = row->value();
    auto bad = [&](std::string_view what) {
      return MakeError(ErrorCode::kMalformedLine,
                       fmt::format("{}:{}: {}", path.string(), csv.record_line(), what));
    };
    if (fields.size() != csv.header().size()) return bad("wrong field count");
    std::string_view text = TrimAscii(fields[*score]);
    double value = 0.0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size()) return bad("bad score");
    std::string flag = AsciiLower(TrimAscii(fields[*label]));
    bool positive;
    if (flag == "1" || flag == "true") {
      positive = true;
    } else if (flag == "0" || flag == "false") {
      positive = false;
    } else {
      return bad("bad label");
    }
    table.uids.push_back(uid ? fields[*uid] : std::string());
    table.scores.push_back(value);
    table.labels.push_back(positive);
  }
  return table;
}

Result<PipelineConfig> ParsePipelineConfig(std::string_view json_text,
                                           const std::filesystem::path& base_dir) {
  auto config_error = [](std::string message) {
    return MakeError(ErrorCode::kConfigError, std::move(message));
  };
  json doc = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) return config_error("config is not a JSON object");

  static const std::set<std::string> kKeys = {
      "input",       "format",         "patterns",    "agents",
      "annotations", "cache_dir",      "offline",     "top_k",
      "jobs",        "released_total", "agent_match", "scores",
      "threshold",   "ci_level",       "ci_method",   "public_suffix_list",
      "fetch"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.contains(key)) return config_error("unknown key '" + key + "'");
  }

  PipelineConfig config;
  auto resolve = [&](const std::string& text) -> std::filesystem::path {
    std::filesystem::path path(text);
    return path.is_absolute() ? path : base_dir / path;
  };
  auto get_string = [&](const char* key, std::string& into) -> std::optional<Error> {
    if (!doc.contains(key)) return std::nullopt;
    if (!doc[key].is_string()) return config_error(fmt::format("'{}' must be a string", key));
    into = doc[key].get<std::string>();
    return std::nullopt;
  };
  auto get_path = [&](const char* key, std::filesystem::path& into) -> std::optional<Error> {
    std::string text;
    if (auto e = get_string(key, text)) return e;
    if (!text.empty()) into = resolve(text);
    return std::nullopt;
  };
  auto get_number = [&](const char* key, double& into) -> std::optional<Error> {
    if (!doc.contains(key)) return std::nullopt;
    if (!doc[key].is_number()) return config_error(fmt::format("'{}' must be a number", key));
    into = doc[key].get<double>();
    return std::nullopt;
  };
  auto get_count = [&](const char* key, std::uint64_t& into) -> std::optional<Error> {
    if (!doc.contains(key)) return std::nullopt;
    if (!doc[key].is_number_unsigned()) {
      return config_error(fmt::format("'{}' must be a non-negative integer", key));
    }
    into = doc[key].get<std::uint64_t>();
    return std::nullopt;
  };

  std::string format = "ndrecords";
  std::string agent_match = "exact";
  std::string ci_method = "wald";
  std::uint64_t top_k = config.top_k;
  std::uint64_t jobs = 1;
  if (auto e = get_path("input", config.input)) return *e;
  if (auto e = get_string("format", format)) return *e;
  if (auto e = get_string("patterns", config.patterns)) return *e;
  if (auto e = get_string("agents", config.agents)) return *e;
  if (auto e = get_path("annotations", config.annotations)) return *e;
  if (auto e = get_path("cache_dir", config.cache_dir)) return *e;
  if (auto e = get_count("top_k", top_k)) return *e;
  if (auto e = get_count("jobs", jobs)) return *e;
  if (auto e = get_string("agent_match", agent_match)) return *e;
  if (auto e = get_path("scores", config.scores)) return *e;
  if (auto e = get_number("threshold", config.threshold)) return *e;
  if (auto e = get_number("ci_level", config.ci_level)) return *e;
  if (auto e = get_string("ci_method", ci_method)) return *e;
  if (auto e = get_path("public_suffix_list", config.public_suffix_list)) return *e;
  if (doc.contains("released_total")) {
    std::uint64_t released = 0;
    if (auto e = get_count("released_total", released)) return *e;
    config.released_total = released;
  }
  if (doc.contains("offline")) {
    if (!doc["offline"].is_boolean()) return config_error("'offline' must be a boolean");
    config.offline = doc["offline"].get<bool>();
  }
  if (doc.contains("fetch")) {
    const json& fetch = doc["fetch"];
    if (!fetch.is_object()) return config_error("'fetch' must be an object");
    for (const auto& [key, value] : fetch.items()) {
      if (key == "timeout_ms" && value.is_number_unsigned()) {
        config.fetch.timeout = std::chrono::milliseconds(value.get<std::int64_t>());
      } else if (key == "delay_ms" && value.is_number_unsigned()) {
        config.fetch.per_host_delay = std::chrono::milliseconds(value.get<std::int64_t>());
      } else if (key == "max_concurrency" && value.is_number_unsigned()) {
        config.fetch.max_concurrency = value.get<int>();
      } else if (key == "max_redirects" && value.is_number_unsigned()) {
        config.fetch.max_redirects = value.get<int>();
      } else if (key == "user_agent" && value.is_string()) {
        config.fetch.user_agent = value.get<std::string>();
      } else {
        return config_error("bad fetch setting '" + key + "'");
      }
    }
  }

  if (config.input.empty()) return config_error("'input' is required");
  if (!std::filesystem::is_regular_file(config.input)) {
    return config_error("input not found: " + config.input.string());
  }
  auto parsed_format = ParseInputFormat(format);
  if (!parsed_format) return config_error("unknown format '" + format + "'");
  config.format = *parsed_format;
  if (agent_match == "exact") {
    config.agent_match = AgentMatch::kExact;
  } else if (agent_match == "case-insensitive") {
    config.agent_match = AgentMatch::kCaseInsensitive;
  } else {
    return config_error("agent_match must be exact or case-insensitive");
  }
  auto method = ParseCiMethod(ci_method);
  if (!method) return config_error("ci_method must be wald or wilson");
  config.ci_method = *method;
  if (top_k < 1) return config_error("top_k must be >= 1");
  config.top_k = static_cast<std::size_t>(top_k);
  if (jobs < 1 || jobs > 256) return config_error("jobs must be in [1, 256]");
  config.jobs = static_cast<int>(jobs);
  if (config.patterns != "builtin") config.patterns = resolve(config.patterns).string();
  if (config.agents != "builtin") config.agents = resolve(config.agents).string();
  for (const std::string* file : {&config.patterns, &config.agents}) {
    if (*file != "builtin" && !std::filesystem::is_regular_file(*file)) {
      return config_error("file not found: " + *file);
    }
  }
  for (const auto* file : {&config.annotations, &config.scores, &config.public_suffix_list}) {
    if (!file->empty() && !std::filesystem::is_regular_file(*file)) {
      return config_error("file not found: " + file->string());
    }
  }
  if (config.offline) {
    if (config.cache_dir.empty()) return config_error("offline mode needs 'cache_dir'");
    if (!std::filesystem::is_directory(config.cache_dir)) {
      return config_error("cache_dir not found: " + config.cache_dir.string());
    }
  }
  config.fetch.cache_dir = config.cache_dir;
  config.fetch.offline = config.offline;
  if (auto error = config.fetch.Validate()) return config_error(error->message);
  return config;
}

Result<PipelineConfig> LoadPipelineConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return MakeError(ErrorCode::kConfigError, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParsePipelineConfig(buffer.str(), path.parent_path());
}

PipelineResult RunPipeline(const PipelineConfig& config, const std::filesystem::path& out_dir,
                           HttpTransport* transport) {
  PipelineResult result;
  std::map<std::string, std::string> outputs;  // file -> sha256
  auto fail = [&](std::string stage, const Error& error) {
    result.stages.push_back({std::move(stage), "failed", error.ToString()});
    if (result.exit_code == kExitOk) result.exit_code = kExitPartialFailure;
  };
  auto skip = [&](std::string stage, std::string why) {
    result.stages.push_back({std::move(stage), "skipped", std::move(why)});
  };
  auto write = [&](const std::string& name, const std::string& content) -> std::optional<Error> {
    std::ofstream out(out_dir / name, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) return MakeError(ErrorCode::kIoError, "cannot write " + (out_dir / name).string());
    outputs[name] = Sha256Hex(content);
    return std::nullopt;
  };
  auto write_manifest = [&] {
    json manifest;
    manifest["version"] = CONSENT_AUDIT_VERSION;
    manifest["exit_code"] = result.exit_code;
    manifest["stages"] = json::array();
    for (const auto& stage : result.stages) {
      manifest["stages"].push_back(
          {{"name", stage.name}, {"status", stage.status}, {"detail", stage.detail}});
    }
    manifest["outputs"] = outputs;
    std::ofstream out(out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
    out << manifest.dump(2) << '\n';
  };

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    result.stages.push_back({"config", "failed", "cannot create " + out_dir.string()});
    result.exit_code = kExitUsage;
    return result;
  }

  // Everything that can be rejected up front is, before any scanning.
  std::optional<PatternSet> patterns;
  std::optional<AgentList> agents;
  std::optional<SuffixRules> rules;
  {
    auto loaded_patterns = config.patterns == "builtin" ? Result<PatternSet>(DefaultPatternSet())
                                                        : PatternSet::LoadFile(config.patterns);
    auto loaded_agents = config.agents == "builtin" ? Result<AgentList>(BuiltinAgentList())
                                                    : AgentList::LoadFile(config.agents);
    auto loaded_rules =
        config.public_suffix_list.empty()
            ? SuffixRules::LoadDefault()
            : SuffixRules::LoadFile(config.public_suffix_list, SuffixSections::kIcannOnly);
    const Error* errors[] = {loaded_patterns.ok() ? nullptr : &loaded_patterns.error(),
                             loaded_agents.ok() ? nullptr : &loaded_agents.error(),
                             loaded_rules.ok() ? nullptr : &loaded_rules.error()};
    for (const Error* error : errors) {
      if (error) {
        result.stages.push_back({"config", "failed", error->ToString()});
        result.exit_code = kExitUsage;
        write_manifest();
        return result;
      }
    }
    patterns = std::move(loaded_patterns).value();
    agents = std::move(loaded_agents).value();
    rules = std::move(loaded_rules).value();
  }

  Provenance base_provenance;
  if (auto error = base_provenance.AddInput(config.input)) {
    fail("scan", *error);
    write_manifest();
    return result;
  }

  // Stage 1: ingest, scan, domains.
  auto reader = SampleReader::Open(config.input, config.format);
  if (!reader.ok()) {
    fail("scan", reader.error());
    skip("robots", "scan failed");
    skip("tos", "scan failed");
    skip("metrics", "scan failed");
    write_manifest();
    return result;
  }
  std::ostringstream rejects;
  rejects << "line\terror\tmessage\n";
  ScanOptions scan_options;
  scan_options.jobs = config.jobs;
  scan_options.suffix_rules = &*rules;
  ScanOutcome scan = RunScan(**reader, *patterns, scan_options, [&](const Rejection& r) {
    std::string message = r.error.message;
    for (char& c : message) {
      if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    rejects << r.line_no << '\t' << ErrorCodeName(r.error.code) << '\t' << message << '\n';
  });
  Denominator denom = ChooseDenominator(scan.counts, config.released_total);
  std::vector<DomainShare> top = TopK(scan.domains, config.top_k);
  std::set<std::string> top_bases;
  for (const auto& row : top) top_bases.insert(row.domain);
  {
    std::ostringstream csv, md, domains, full;
    WriteProvenance(csv, base_provenance, CommentStyle::kHash);
    WriteTableThreeCsv(csv, scan.counts, denom);
    WriteProvenance(md, base_provenance, CommentStyle::kHtml);
    WriteTableThreeMarkdown(md, scan.counts, denom);
    WriteProvenance(domains, base_provenance, CommentStyle::kHash);
    WriteDomainsCsv(domains, top);
    WriteProvenance(full, base_provenance, CommentStyle::kHash);
    WriteFullDomainsCsv(full, scan.domains, &top_bases);
    std::optional<Error> error;
    for (const auto& [name, content] :
         {std::pair{"table3.csv", csv.str()}, std::pair{"table3.md", md.str()},
          std::pair{"domains.csv", domains.str()}, std::pair{"full_domains.csv", full.str()},
          std::pair{"rejects.tsv", rejects.str()}}) {
      if (!error) error = write(name, content);
    }
    if (scan.io_error) error = scan.io_error;
    if (error) {
      fail("scan", *error);
    } else {
      result.stages.push_back(
          {"scan", "ok",
           fmt::format("{} records, {} valid, {} rejected", scan.stats.total_records,
                       scan.stats.valid, scan.stats.rejected_total())});
    }
  }

  // Stage 2: robots.txt census over the full domains of the top bases.
  std::vector<std::string> hosts;
  std::map<std::string, std::uint64_t> host_weights;
  for (const auto& [host, entry] : scan.domains.full_domains()) {
    if (top_bases.contains(entry.base)) {
      hosts.push_back(host);
      host_weights[host] = entry.count;
    }
  }
  if (config.cache_dir.empty() && (config.offline || !transport)) {
    skip("robots", "no cache_dir");
  } else {
    Result<RobotsCensus> census = [&]() -> Result<RobotsCensus> {
      if (config.offline) return CensusFromCache(RobotsCache(config.cache_dir), hosts);
      RobotsFetcher fetcher(config.fetch, *transport);
      return CensusFromFetches(fetcher.FetchAll(hosts));
    }();
    if (!census.ok()) {
      fail("robots", census.error());
    } else {
      ObservationTable table = TallyObservations(census->docs, host_weights, *agents,
                                                 TallyOptions{config.agent_match, true});
      Provenance provenance = base_provenance;
      provenance.cache_snapshot = census->snapshot;
      std::ostringstream csv, md;
      WriteProvenance(csv, provenance, CommentStyle::kHash);
      WriteTableFiveCsv(csv, table);
      WriteProvenance(md, provenance, CommentStyle::kHtml);
      WriteTableFiveMarkdown(md, table);
      std::optional<Error> error = write("table5.csv", csv.str());
      if (!error) error = write("table5.md", md.str());
      if (error) {
        fail("robots", *error);
      } else {
        result.stages.push_back(
            {"robots", "ok",
             fmt::format("{} attempted, {} success, {} empty, {} unreachable", census->attempted,
                         census->success, census->empty, census->unreachable)});
      }
    }
  }

  // Stage 3: ToS distributions.
  if (config.annotations.empty()) {
    skip("tos", "no annotations");
  } else {
    auto annotations = LoadAnnotations(config.annotations);
    std::optional<Error> error;
    std::ostringstream csv, md;
    Provenance provenance = base_provenance;
    if (!annotations.ok()) {
      error = annotations.error();
    } else {
      error = provenance.AddInput(config.annotations);
    }
    if (!error) {
      WriteProvenance(csv, provenance, CommentStyle::kHash);
      csv << "attribute,value,samples,share\n";
      WriteProvenance(md, provenance, CommentStyle::kHtml);
      for (auto attribute :
           {TosAttribute::kCategory, TosAttribute::kLicenseType, TosAttribute::kScrapingPolicy}) {
        auto shares = WeightedDistribution(*annotations, scan.domains.base_counts(), attribute);
        if (!shares.ok()) {
          error = shares.error();
          break;
        }
        WriteTosCsv(csv, attribute, *shares);
        md << '\n';
        WriteTosMarkdown(md, attribute, *shares);
      }
    }
    if (!error) error = write("tos_report.csv", csv.str());
    if (!error) error = write("tos_report.md", md.str());
    if (error) {
      fail("tos", *error);
    } else {
      result.stages.push_back({"tos", "ok", fmt::format("{} domains", annotations->size())});
    }
  }

  // Stage 4: metrics.
  {
    json metrics;
    std::optional<Error> error;
    metrics["denominator"] = {{"kind", denom.label}, {"value", denom.value}};
    if (denom.value > 0 && scan.counts.any <= denom.value) {
      auto ci = BinomialCi(scan.counts.any, denom.value, config.ci_level, config.ci_method);
      if (!ci.ok()) {
        error = ci.error();
      } else {
        metrics["notice_prevalence"] = {
            {"k", scan.counts.any},
            {"n", denom.value},
            {"point", static_cast<double>(scan.counts.any) / static_cast<double>(denom.value)},
            {"ci",
             {{"method", CiMethodName(config.ci_method)},
              {"level", config.ci_level},
              {"lo", ci->lo},
              {"hi", ci->hi}}}};
      }
    }
    if (!error && !config.scores.empty()) {
      auto scores = LoadScores(config.scores);
      if (!scores.ok()) {
        error = scores.error();
      } else {
        const std::vector<bool>& labels = scores->labels;
        auto threshold = ThresholdMetrics(scores->scores, labels, config.threshold);
        auto auc = RocAuc(scores->scores, labels);
        if (!threshold.ok()) {
          error = threshold.error();
        } else if (!auc.ok()) {
          error = auc.error();
        } else {
          const Prf& prf = threshold->prf;
          const ConfusionCounts& c = threshold->counts;
          auto optional_number = [](const std::optional<double>& v) {
            return v ? json(*v) : json(nullptr);
          };
          metrics["scores"] = {
              {"threshold", config.threshold},
              {"tp", c.tp},
              {"fp", c.fp},
              {"tn", c.tn},
              {"fn", c.fn},
              {"accuracy", prf.accuracy},
              {"precision", optional_number(prf.precision)},
              {"recall", optional_number(prf.recall)},
              {"f1", prf.f1},
              {"roc_auc", *auc},
              {"prevalence", static_cast<double>(c.tp + c.fn) / static_cast<double>(c.total())}};
        }
      }
    }
    if (!error) {
      std::ostringstream out;
      out << metrics.dump(2) << '\n';
      error = write("metrics.json", out.str());
    }
    if (error) {
      fail("metrics", *error);
    } else {
      result.stages.push_back(
          {"metrics", "ok",
           metrics.contains("scores") ? "metrics.json with scores" : "metrics.json"});
    }
  }

  write_manifest();
  return result;
}

}  // namespace consent_audit
