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

// consent_audit: command-line front end.
//
// Exit codes: 0 success, 1 partial failure, 2 usage or configuration error.

#include <fmt/format.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "consent_audit/codec.h"
#include "consent_audit/csv.h"
#include "consent_audit/domains.h"
#include "consent_audit/exif.h"
#include "consent_audit/ingest.h"
#include "consent_audit/metrics.h"
#include "consent_audit/notice_scan.h"
#include "consent_audit/public_suffix.h"
#include "consent_audit/report.h"
#include "consent_audit/robots.h"
#include "consent_audit/robots_fetch.h"
#include "consent_audit/strings.h"
#include "consent_audit/synthetic.h"
#include "consent_audit/tally.h"
#include "consent_audit/tos.h"
#include "json.hpp"

namespace consent_audit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GlobalFlags {
  std::string input;
  std::string out_dir;
  int jobs = 1;
  std::uint64_t seed = 1;
  bool offline = false;
};

int Fail(const Error& error, int code = kExitPartialFailure) {
  std::cerr << "error: " << error.ToString() << '\n';
  return code;
}

int Usage(const std::string& message) {
  std::cerr << "error: " << message << '\n';
  return kExitUsage;
}

// Writes `content` to `path`, creating parent directories.
std::optional<Error> WriteFile(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) return MakeError(ErrorCode::kIoError, "cannot write " + path.string());
  return std::nullopt;
}

fs::path OutPath(const GlobalFlags& flags, const std::string& explicit_path,
                 const std::string& default_name) {
  if (!explicit_path.empty()) return explicit_path;
  return fs::path(flags.out_dir.empty() ? "." : flags.out_dir) / default_name;
}

// Sibling path with another extension: table.csv -> table.md.
fs::path WithExtension(fs::path path, const char* extension) {
  return path.replace_extension(extension);
}

Result<PatternSet> LoadPatterns(const std::string& spec) {
  if (spec == "builtin") return DefaultPatternSet();
  return PatternSet::LoadFile(spec);
}

Result<AgentList> LoadAgents(const std::string& spec) {
  if (spec == "builtin") return BuiltinAgentList();
  return AgentList::LoadFile(spec);
}

Result<SuffixRules> LoadRules(const std::string& path, bool include_private) {
  SuffixSections sections =
      include_private ? SuffixSections::kIcannAndPrivate : SuffixSections::kIcannOnly;
  if (path == "last-two-labels") return SuffixRules::LastTwoLabels();
  if (path.empty() && !include_private) return SuffixRules::LoadDefault();
  return SuffixRules::LoadFile(path.empty() ? DefaultSuffixListPath() : fs::path(path), sections);
}

// Streams rejections to a TSV sidecar and keeps per-kind counts for stderr.
class RejectLog {
 public:
  explicit RejectLog(fs::path path) : path_(std::move(path)) {
    std::error_code ec;
    if (path_.has_parent_path()) fs::create_directories(path_.parent_path(), ec);
    out_.open(path_, std::ios::binary | std::ios::trunc);
    out_ << "line\terror\tmessage\n";
  }

  void Add(const Rejection& rejection) {
    std::string message = rejection.error.message;
    for (char& c : message) {
      if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    out_ << rejection.line_no << '\t' << ErrorCodeName(rejection.error.code) << '\t' << message
         << '\n';
  }

  void Summarize(const StreamStats& stats) {
    out_.flush();
    if (stats.rejected_total() == 0) return;
    std::string kinds;
    for (const auto& [code, count] : stats.rejected) {
      kinds += fmt::format("{}{}={}", kinds.empty() ? "" : ", ", ErrorCodeName(code), count);
    }
    std::cerr << fmt::format("rejected {} of {} records ({}); details in {}\n",
                             stats.rejected_total(), stats.total_records, kinds, path_.string());
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

fs::path RejectsPath(const GlobalFlags& flags, const std::string& explicit_path) {
  if (!explicit_path.empty()) return explicit_path;
  if (!flags.out_dir.empty()) return fs::path(flags.out_dir) / "rejects.tsv";
  return flags.input + ".rejects.tsv";
}

// ---- scan ----

struct ScanArgs {
  std::string format = "ndrecords";
  std::string patterns = "builtin";
  std::string rejects;
  std::optional<std::uint64_t> released_total;
};

int RunScanCommand(const GlobalFlags& flags, const ScanArgs& args) {
  if (flags.input.empty()) return Usage("--input is required");
  auto format = ParseInputFormat(args.format);
  if (!format) return Usage("unknown --format " + args.format);
  auto patterns = LoadPatterns(args.patterns);
  if (!patterns.ok()) return Fail(patterns.error(), kExitUsage);
  auto reader = SampleReader::Open(flags.input, *format);
  if (!reader.ok()) return Fail(reader.error());
  Provenance provenance;
  if (auto error = provenance.AddInput(flags.input)) return Fail(*error);

  RejectLog rejects(RejectsPath(flags, args.rejects));
  ScanOptions options;
  options.jobs = flags.jobs;
  ScanOutcome outcome =
      RunScan(**reader, *patterns, options, [&](const Rejection& r) { rejects.Add(r); });
  rejects.Summarize(outcome.stats);

  Denominator denom = ChooseDenominator(outcome.counts, args.released_total);
  std::ostringstream csv, md;
  WriteProvenance(csv, provenance, CommentStyle::kHash);
  WriteTableThreeCsv(csv, outcome.counts, denom);
  WriteProvenance(md, provenance, CommentStyle::kHtml);
  WriteTableThreeMarkdown(md, outcome.counts, denom);
  if (flags.out_dir.empty()) {
    std::cout << md.str();
  } else {
    for (auto [name, content] :
         {std::pair{"table3.csv", csv.str()}, std::pair{"table3.md", md.str()}}) {
      if (auto error = WriteFile(fs::path(flags.out_dir) / name, content)) return Fail(*error);
    }
  }
  if (outcome.io_error) return Fail(*outcome.io_error);
  return kExitOk;
}

// ---- exif ----

int RunExifCommand(const GlobalFlags& flags, bool batch, const std::string& format_name,
                   const std::string& rejects_path) {
  if (flags.input.empty()) return Usage("--input is required");
  if (!batch) {
    std::ifstream in(flags.input, std::ios::binary);
    if (!in) return Fail(MakeError(ErrorCode::kIoError, "cannot read " + flags.input));
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    auto parsed = ParseExifCopyright(bytes);
    if (!parsed.ok()) return Fail(parsed.error());
    std::cout << (*parsed ? (*parsed)->value : std::string("absent")) << '\n';
    return kExitOk;
  }
  auto format = ParseInputFormat(format_name);
  if (!format) return Usage("unknown --format " + format_name);
  auto reader = SampleReader::Open(flags.input, *format);
  if (!reader.ok()) return Fail(reader.error());
  RejectLog rejects(RejectsPath(flags, rejects_path));
  std::uint64_t hits = 0;
  std::uint64_t errors = 0;
  std::cout << "uid\tcopyright\n";
  while (auto next = (*reader)->Next()) {
    if (auto* rejection = std::get_if<Rejection>(&*next)) {
      rejects.Add(*rejection);
      continue;
    }
    const Sample& sample = std::get<Sample>(*next);
    ExifFinding finding = FindExifCopyright(sample);
    if (finding.error) ++errors;
    if (finding.copyright) {
      ++hits;
      std::string value = finding.copyright->value;
      for (char& c : value) {
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
      }
      std::cout << sample.uid << '\t' << value << '\n';
    }
  }
  rejects.Summarize((*reader)->stats());
  std::cerr << fmt::format("{} of {} samples carry an EXIF copyright; {} raw EXIF parse errors\n",
                           hits, (*reader)->stats().valid, errors);
  return kExitOk;
}

// ---- domains ----

struct DomainArgs {
  std::string format = "ndrecords";
  std::size_t top = 50;
  std::string out;
  std::string psl;
  bool psl_private = false;
  std::string rejects;
};

int RunDomainsCommand(const GlobalFlags& flags, const DomainArgs& args) {
  if (flags.input.empty()) return Usage("--input is required");
  auto format = ParseInputFormat(args.format);
  if (!format) return Usage("unknown --format " + args.format);
  if (args.top < 1) return Usage("--top must be >= 1");
  auto rules = LoadRules(args.psl, args.psl_private);
  if (!rules.ok()) return Fail(rules.error(), kExitUsage);
  auto reader = SampleReader::Open(flags.input, *format);
  if (!reader.ok()) return Fail(reader.error());
  Provenance provenance;
  if (auto error = provenance.AddInput(flags.input)) return Fail(*error);

  RejectLog rejects(RejectsPath(flags, args.rejects));
  DomainTracker tracker(*rules);
  while (auto next = (*reader)->Next()) {
    if (auto* rejection = std::get_if<Rejection>(&*next)) {
      rejects.Add(*rejection);
    } else {
      (void)tracker.Add(std::get<Sample>(*next));
    }
  }
  rejects.Summarize((*reader)->stats());

  std::vector<DomainShare> top = TopK(tracker.counter(), args.top);
  std::set<std::string> bases;
  double covered = 0.0;
  for (const auto& row : top) {
    bases.insert(row.domain);
    covered += row.share;
  }
  std::ostringstream domains, full;
  WriteProvenance(domains, provenance, CommentStyle::kHash);
  WriteDomainsCsv(domains, top);
  WriteProvenance(full, provenance, CommentStyle::kHash);
  WriteFullDomainsCsv(full, tracker.counter(), &bases);
  fs::path out = OutPath(flags, args.out, "domains.csv");
  if (auto error = WriteFile(out, domains.str())) return Fail(*error);
  if (auto error = WriteFile(out.parent_path() / "full_domains.csv", full.str())) {
    return Fail(*error);
  }
  std::cerr << fmt::format("top {} base domains cover {:.4f} of {} samples\n", top.size(), covered,
                           tracker.counter().total());
  if ((*reader)->io_error()) return Fail(*(*reader)->io_error());
  return kExitOk;
}

// ---- robots ----

struct FetchArgs {
  std::string domains;
  std::string cache;
  int concurrency = 8;
  int delay_ms = 1000;
  int timeout_ms = 10000;
  int max_redirects = 5;
  std::string user_agent;
  std::vector<std::string> resolve;
};

Result<std::vector<std::string>> ReadHostList(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return MakeError(ErrorCode::kIoError, "cannot read " + path.string());
  CsvReader csv(in);
  if (auto header = csv.ReadHeader(); !header.ok()) return header.error();
  auto column = csv.Column("full_domain");
  if (!column) column = csv.Column("base_domain");
  if (!column) column = 0;
  std::set<std::string> hosts;
  while (auto row = csv.NextRow()) {
    if (!row->ok()) return row->error();
    if (*column < row->value().size() && !row->value()[*column].empty()) {
      hosts.insert(row->value()[*column]);
    }
  }
  return std::vector<std::string>(hosts.begin(), hosts.end());
}

int RunRobotsFetch(const GlobalFlags& flags, const FetchArgs& args) {
  if (args.domains.empty()) return Usage("--domains is required");
  FetchPolicy policy;
  policy.cache_dir = args.cache;
  policy.offline = flags.offline;
  policy.max_concurrency = args.concurrency;
  policy.per_host_delay = std::chrono::milliseconds(args.delay_ms);
  policy.timeout = std::chrono::milliseconds(args.timeout_ms);
  policy.max_redirects = args.max_redirects;
  if (!args.user_agent.empty()) policy.user_agent = args.user_agent;
  for (const std::string& entry : args.resolve) {
    std::size_t eq = entry.find('=');
    if (eq == std::string::npos) return Usage("--resolve expects host=address:port");
    policy.resolve[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  if (auto error = policy.Validate()) return Fail(*error, kExitUsage);
  auto hosts = ReadHostList(args.domains);
  if (!hosts.ok()) return Fail(hosts.error());

  HttplibTransport transport;
  RobotsFetcher fetcher(policy, transport);
  std::vector<FetchResult> results = fetcher.FetchAll(*hosts);
  std::map<FetchStatus, std::uint64_t> tally;
  bool cache_failed = false;
  std::cout << "host\tstatus\tfinal_url\treason\n";
  for (const FetchResult& r : results) {
    ++tally[r.status];
    std::cout << r.host << '\t' << FetchStatusName(r.status) << '\t' << r.final_url << '\t'
              << r.reason << '\n';
    if (r.cache_error) {
      std::cerr << "cache: " << r.cache_error->ToString() << '\n';
      cache_failed = true;
    }
  }
  std::cerr << fmt::format("{} hosts: {} success, {} empty, {} unreachable\n", results.size(),
                           tally[FetchStatus::kSuccess], tally[FetchStatus::kEmpty],
                           tally[FetchStatus::kUnreachable]);
  return cache_failed ? kExitPartialFailure : kExitOk;
}

struct AnalyzeArgs {
  std::string cache;
  std::string agents = "builtin";
  std::string weights;
  std::string out;
  std::string match = "exact";
  bool all_agents = false;
  double threshold = 0.8;
};

int RunRobotsAnalyze(const GlobalFlags& flags, const AnalyzeArgs& args) {
  if (args.cache.empty()) return Usage("--cache is required");
  if (args.weights.empty()) return Usage("--weights is required");
  AgentMatch match;
  if (args.match == "exact") {
    match = AgentMatch::kExact;
  } else if (args.match == "case-insensitive") {
    match = AgentMatch::kCaseInsensitive;
  } else {
    return Usage("--match must be exact or case-insensitive");
  }
  auto agents = LoadAgents(args.agents);
  if (!agents.ok()) return Fail(agents.error(), kExitUsage);
  auto weights = ReadDomainWeights(args.weights, "full_domain");
  if (!weights.ok()) return Fail(weights.error());

  RobotsCache cache(args.cache);
  std::vector<std::string> hosts;
  for (const auto& [host, count] : weights->counts) hosts.push_back(host);
  auto census = CensusFromCache(cache, hosts);
  if (!census.ok()) return Fail(census.error());
  ObservationTable table = TallyObservations(census->docs, weights->counts, *agents,
                                             TallyOptions{match, !args.all_agents});

  Provenance provenance;
  if (auto error = provenance.AddInput(args.weights)) return Fail(*error);
  provenance.cache_snapshot = census->snapshot;
  TableFiveOptions options{args.threshold};
  std::ostringstream csv, md;
  WriteProvenance(csv, provenance, CommentStyle::kHash);
  WriteTableFiveCsv(csv, table, options);
  WriteProvenance(md, provenance, CommentStyle::kHtml);
  WriteTableFiveMarkdown(md, table, options);
  fs::path out = OutPath(flags, args.out, "table5.csv");
  if (auto error = WriteFile(out, csv.str())) return Fail(*error);
  if (auto error = WriteFile(WithExtension(out, ".md"), md.str())) return Fail(*error);
  return kExitOk;
}

int RunRobotsImport(const std::string& dir, const std::string& cache_dir,
                    const std::string& fetched_at) {
  if (dir.empty() || cache_dir.empty()) return Usage("--dir and --cache are required");
  RobotsCache cache(cache_dir);
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry);
  }
  if (ec) return Fail(MakeError(ErrorCode::kIoError, dir + ": " + ec.message()));
  std::sort(files.begin(), files.end());
  std::string stamp =
      fetched_at.empty() ? FormatTimestamp(std::chrono::system_clock::now()) : fetched_at;
  for (const fs::path& file : files) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    FetchResult result;
    result.host = file.stem().string();
    result.body = buffer.str();
    result.fetched_at = stamp;
    result.final_url = RobotsUrl(result.host, "https");
    result.user_agent = "import";
    if (IsBlank(result.body)) {
      result.status = FetchStatus::kEmpty;
      result.body.clear();
    } else {
      result.status = FetchStatus::kSuccess;
      result.digest = Sha256Hex(result.body);
    }
    if (auto error = cache.Store(result)) return Fail(*error);
  }
  std::cerr << fmt::format("imported {} robots.txt files into {}\n", files.size(), cache_dir);
  return kExitOk;
}

// ---- tos ----

int RunTosCommand(const GlobalFlags& flags, const std::string& annotations_path,
                  const std::string& weights_path, const std::string& out_path) {
  if (annotations_path.empty() || weights_path.empty()) {
    return Usage("--annotations and --weights are required");
  }
  auto annotations = LoadAnnotations(annotations_path);
  if (!annotations.ok()) return Fail(annotations.error());
  auto weights = ReadDomainWeights(weights_path, "base_domain");
  if (!weights.ok()) return Fail(weights.error());
  Provenance provenance;
  if (auto error = provenance.AddInput(annotations_path)) return Fail(*error);
  if (auto error = provenance.AddInput(weights_path)) return Fail(*error);
  std::ostringstream csv, md;
  WriteProvenance(csv, provenance, CommentStyle::kHash);
  csv << "attribute,value,samples,share\n";
  WriteProvenance(md, provenance, CommentStyle::kHtml);
  for (auto attribute :
       {TosAttribute::kCategory, TosAttribute::kLicenseType, TosAttribute::kScrapingPolicy}) {
    auto shares = WeightedDistribution(*annotations, weights->counts, attribute);
    if (!shares.ok()) return Fail(shares.error());
    WriteTosCsv(csv, attribute, *shares);
    md << '\n';
    WriteTosMarkdown(md, attribute, *shares);
  }
  fs::path out = OutPath(flags, out_path, "tos_report.csv");
  if (auto error = WriteFile(out, csv.str())) return Fail(*error);
  if (auto error = WriteFile(WithExtension(out, ".md"), md.str())) return Fail(*error);
  return kExitOk;
}

// ---- metrics ----

json PrfJson(const ConfusionCounts& c, const Prf& prf) {
  auto optional_number = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  return {{"tp", c.tp},
          {"fp", c.fp},
          {"tn", c.tn},
          {"fn", c.fn},
          {"accuracy", prf.accuracy},
          {"precision", optional_number(prf.precision)},
          {"recall", optional_number(prf.recall)},
          {"f1", prf.f1},
          {"prevalence", static_cast<double>(c.tp + c.fn) / static_cast<double>(c.total())}};
}

// ---- generate ----

struct GenerateArgs {
  std::string kind = "corpus";
  std::uint64_t samples = 10'000;
  std::string out;
  std::string truth;
  double raw_exif_rate = 0.0;
};

int RunGenerate(const GlobalFlags& flags, const GenerateArgs& args) {
  fs::path out = OutPath(flags, args.out, args.kind == "scores" ? "scores.csv" : "records.jsonl");
  std::error_code ec;
  if (out.has_parent_path()) fs::create_directories(out.parent_path(), ec);
  std::ofstream stream(out, std::ios::binary | std::ios::trunc);
  if (!stream) return Fail(MakeError(ErrorCode::kIoError, "cannot write " + out.string()));
  if (args.kind == "scores") {
    WriteScoresCsv(stream, GenerateScores(ConfusionCounts{90, 174, 958, 86}, flags.seed));
    return stream ? kExitOk : Fail(MakeError(ErrorCode::kIoError, out.string()));
  }
  if (args.kind != "corpus") return Usage("--kind must be corpus or scores");
  CorpusSpec spec = ScaledSpec(args.samples, flags.seed);
  spec.raw_exif_rate = args.raw_exif_rate;
  CorpusTruth truth = WriteCorpus(spec, stream);
  stream.close();
  if (!stream) return Fail(MakeError(ErrorCode::kIoError, "cannot write " + out.string()));
  json doc = {{"samples", truth.samples}, {"caption", truth.caption}, {"ocr", truth.ocr},
              {"exif", truth.exif},       {"any", truth.any},         {"seed", flags.seed}};
  if (!args.truth.empty()) {
    doc["base_counts"] = truth.base_counts;
    if (auto error = WriteFile(args.truth, doc.dump(2) + "\n")) return Fail(*error);
  }
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Audits data-consent signals in url-text dataset releases.", "consent_audit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CONSENT_AUDIT_VERSION));
  GlobalFlags flags;
  app.add_option("--input", flags.input, "Input records (ndrecords or csv)");
  app.add_option("--out-dir", flags.out_dir, "Directory for emitted files");
  app.add_option("--jobs", flags.jobs, "Worker threads")->check(CLI::Range(1, 256));
  app.add_option("--seed", flags.seed, "Seed for fixture generators");
  app.add_flag("--offline", flags.offline, "Answer robots.txt requests from the cache only");
  app.fallthrough();

  int code = kExitOk;

  ScanArgs scan_args;
  auto* scan = app.add_subcommand("scan", "Copyright-notice and EXIF scan (sample-level table)");
  scan->add_option("--format", scan_args.format, "ndrecords or csv");
  scan->add_option("--patterns", scan_args.patterns, "Pattern file or 'builtin'");
  scan->add_option("--rejects", scan_args.rejects, "Sidecar file for rejected records");
  scan->add_option("--released-total", scan_args.released_total,
                   "Use this released population as the percentage denominator");
  scan->callback([&] { code = RunScanCommand(flags, scan_args); });

  bool exif_batch = false;
  std::string exif_format = "ndrecords";
  std::string exif_rejects;
  auto* exif = app.add_subcommand("exif", "Print the EXIF copyright of an image, or 'absent'");
  exif->add_flag("--batch", exif_batch, "Treat --input as a record stream");
  exif->add_option("--format", exif_format, "ndrecords or csv (batch mode)");
  exif->add_option("--rejects", exif_rejects, "Sidecar file for rejected records");
  exif->callback([&] { code = RunExifCommand(flags, exif_batch, exif_format, exif_rejects); });

  DomainArgs domain_args;
  auto* domains = app.add_subcommand("domains", "Top-k base domains and their full domains");
  domains->add_option("--format", domain_args.format, "ndrecords or csv");
  domains->add_option("--top", domain_args.top, "Number of base domains");
  domains->add_option("--out", domain_args.out, "domains.csv path (full_domains.csv beside it)");
  domains->add_option("--psl", domain_args.psl,
                      "Public suffix list file, or 'last-two-labels' (default: bundled)");
  domains->add_flag("--psl-private", domain_args.psl_private,
                    "Also apply the PRIVATE section of the suffix list");
  domains->add_option("--rejects", domain_args.rejects, "Sidecar file for rejected records");
  domains->callback([&] { code = RunDomainsCommand(flags, domain_args); });

  auto* robots = app.add_subcommand("robots", "robots.txt census");
  robots->require_subcommand(1);
  FetchArgs fetch_args;
  auto* fetch = robots->add_subcommand("fetch", "Fetch robots.txt for each domain into a cache");
  fetch->add_option("--domains", fetch_args.domains, "CSV with a full_domain column");
  fetch->add_option("--cache", fetch_args.cache, "Cache directory");
  fetch->add_option("--concurrency", fetch_args.concurrency, "Worker pool size");
  fetch->add_option("--delay-ms", fetch_args.delay_ms, "Per-host gap between requests");
  fetch->add_option("--timeout-ms", fetch_args.timeout_ms, "Request timeout");
  fetch->add_option("--max-redirects", fetch_args.max_redirects, "Redirect limit");
  fetch->add_option("--user-agent", fetch_args.user_agent, "User-Agent header");
  fetch->add_option("--resolve", fetch_args.resolve, "host=address:port connect override");
  fetch->callback([&] { code = RunRobotsFetch(flags, fetch_args); });

  AnalyzeArgs analyze_args;
  auto* analyze = robots->add_subcommand("analyze", "Sample-weighted verdict table from a cache");
  analyze->add_option("--cache", analyze_args.cache, "Cache directory");
  analyze->add_option("--agents", analyze_args.agents, "Agent list file or 'builtin'");
  analyze->add_option("--weights", analyze_args.weights, "full_domains.csv from 'domains'");
  analyze->add_option("--out", analyze_args.out, "table CSV path (Markdown beside it)");
  analyze->add_option("--match", analyze_args.match, "exact or case-insensitive");
  analyze->add_flag("--all-agents", analyze_args.all_agents,
                    "Emit a row for every mentioned agent, not only listed ones");
  analyze->add_option("--threshold", analyze_args.threshold,
                      "All Disallowed rate that highlights a row");
  analyze->callback([&] { code = RunRobotsAnalyze(flags, analyze_args); });

  std::string import_dir, import_cache, import_at;
  auto* import = robots->add_subcommand("import", "Store <host>.txt files as cached fetches");
  import->add_option("--dir", import_dir, "Directory of <host>.txt files");
  import->add_option("--cache", import_cache, "Cache directory");
  import->add_option("--fetched-at", import_at, "Timestamp to record (YYYYMMDDTHHMMSSmmmZ)");
  import->callback([&] { code = RunRobotsImport(import_dir, import_cache, import_at); });

  std::string tos_annotations, tos_weights, tos_out;
  auto* tos = app.add_subcommand("tos", "Sample-weighted ToS attribute distributions");
  tos->add_option("--annotations", tos_annotations, "Annotation CSV");
  tos->add_option("--weights", tos_weights, "domains.csv with base_domain,count");
  tos->add_option("--out", tos_out, "tos_report.csv path (Markdown beside it)");
  tos->callback([&] { code = RunTosCommand(flags, tos_annotations, tos_weights, tos_out); });

  auto* metrics = app.add_subcommand("metrics", "Detection metrics");
  metrics->require_subcommand(1);
  ConfusionCounts prf_counts;
  auto* prf = metrics->add_subcommand("prf", "Accuracy, precision, recall, F1 from counts");
  prf->add_option("--tp", prf_counts.tp)->required();
  prf->add_option("--fp", prf_counts.fp)->required();
  prf->add_option("--tn", prf_counts.tn)->required();
  prf->add_option("--fn", prf_counts.fn)->required();
  prf->callback([&] {
    auto result = ComputePrf(prf_counts);
    if (!result.ok()) {
      code = Fail(result.error());
      return;
    }
    std::cout << PrfJson(prf_counts, *result).dump(2) << '\n';
  });

  std::string scores_path;
  double threshold = 0.5;
  auto* roc = metrics->add_subcommand("roc", "ROC-AUC and threshold metrics of a score file");
  roc->add_option("--scores", scores_path, "CSV with uid,score,label")->required();
  roc->add_option("--threshold", threshold, "Positive when score >= threshold");
  roc->callback([&] {
    auto scores = LoadScores(scores_path);
    if (!scores.ok()) {
      code = Fail(scores.error());
      return;
    }
    auto auc = RocAuc(scores->scores, scores->labels);
    auto at = ThresholdMetrics(scores->scores, scores->labels, threshold);
    if (!auc.ok() || !at.ok()) {
      code = Fail(!auc.ok() ? auc.error() : at.error());
      return;
    }
    json out = PrfJson(at->counts, at->prf);
    out["roc_auc"] = *auc;
    out["threshold"] = threshold;
    std::cout << out.dump(2) << '\n';
  });

  std::uint64_t ci_k = 0, ci_n = 0;
  double ci_level = 0.95;
  std::string ci_method = "wald";
  auto* ci = metrics->add_subcommand("ci", "Binomial confidence interval");
  ci->add_option("--k", ci_k, "Successes")->required();
  ci->add_option("--n", ci_n, "Trials")->required();
  ci->add_option("--level", ci_level, "Confidence level");
  ci->add_option("--method", ci_method, "wald or wilson");
  ci->callback([&] {
    auto method = ParseCiMethod(ci_method);
    if (!method) {
      code = Usage("--method must be wald or wilson");
      return;
    }
    auto interval = BinomialCi(ci_k, ci_n, ci_level, *method);
    if (!interval.ok()) {
      code = Fail(interval.error(), kExitUsage);
      return;
    }
    json out = {{"k", ci_k},
                {"n", ci_n},
                {"level", ci_level},
                {"method", CiMethodName(*method)},
                {"point", static_cast<double>(ci_k) / static_cast<double>(ci_n)},
                {"lo", interval->lo},
                {"hi", interval->hi}};
    std::cout << out.dump(2) << '\n';
  });

  double ex_count = 0, ex_source = 0, ex_target = 0;
  auto* extrapolate = metrics->add_subcommand(
      "extrapolate", "Scale a count to a larger population (assumes stable portions)");
  extrapolate->add_option("--count", ex_count)->required();
  extrapolate->add_option("--source-total", ex_source)->required();
  extrapolate->add_option("--target-total", ex_target)->required();
  extrapolate->callback([&] {
    auto value = Extrapolate(ex_count, ex_source, ex_target);
    if (!value.ok()) {
      code = Fail(value.error(), kExitUsage);
      return;
    }
    json out = {{"count", ex_count},
                {"source_total", ex_source},
                {"target_total", ex_target},
                {"estimate", *value},
                {"note", "estimate; assumes the found portion is stable across scales"}};
    std::cout << out.dump(2) << '\n';
  });

  std::string config_path;
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage from a JSON config");
  pipeline->add_option("--config", config_path, "Pipeline config")->required();
  pipeline->callback([&] {
    if (flags.out_dir.empty()) {
      code = Usage("--out-dir is required");
      return;
    }
    auto config = LoadPipelineConfig(config_path);
    if (!config.ok()) {
      code = Fail(config.error(), kExitUsage);
      return;
    }
    if (flags.offline && !config->offline) {
      if (config->cache_dir.empty() || !fs::is_directory(config->cache_dir)) {
        code = Usage("--offline needs an existing cache_dir in the config");
        return;
      }
      config->offline = true;
      config->fetch.offline = true;
    }
    if (flags.jobs > 1) config->jobs = flags.jobs;
    HttplibTransport transport;
    PipelineResult result = RunPipeline(*config, flags.out_dir, &transport);
    for (const auto& stage : result.stages) {
      std::cerr << fmt::format("{:<8} {:<8} {}\n", stage.name, stage.status, stage.detail);
    }
    code = result.exit_code;
  });

  GenerateArgs generate_args;
  auto* generate = app.add_subcommand("generate", "Write seeded synthetic fixtures");
  generate->add_option("--kind", generate_args.kind, "corpus or scores");
  generate->add_option("--samples", generate_args.samples, "Record count (corpus)");
  generate->add_option("--out", generate_args.out, "Output file");
  generate->add_option("--truth", generate_args.truth, "Ground-truth JSON path (corpus)");
  generate->add_option("--raw-exif-rate", generate_args.raw_exif_rate,
                       "Share of EXIF hits written as raw TIFF bytes");
  generate->callback([&] { code = RunGenerate(flags, generate_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }
  return code;
}

}  // namespace
}  // namespace consent_audit

int main(int argc, char** argv) { return consent_audit::Main(argc, argv); }
