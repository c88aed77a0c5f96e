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

// Acceptance run: one PASS/FAIL line per criterion. With no arguments every
// criterion runs; otherwise only the listed numbers. Exit status is the
// number of failures (capped at 1).

#include <fmt/format.h>
#include <spawn.h>
#include <sys/resource.h>
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <nlohmann/json.hpp>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../domain_oracles.h"
#include "../exif_oracles.h"
#include "../notice_oracles.h"
#include "../robots_oracles.h"
#include "../stub_server.h"
#include "../test_util.h"
#include "consent_audit/domains.h"
#include "consent_audit/exif.h"
#include "consent_audit/metrics.h"
#include "consent_audit/notice_scan.h"
#include "consent_audit/report.h"
#include "consent_audit/robots.h"
#include "consent_audit/robots_fetch.h"
#include "consent_audit/synthetic.h"
#include "consent_audit/tally.h"
#include "consent_audit/tos.h"

extern char** environ;

namespace consent_audit::testing {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  // Records a check; the note is kept either way so the line shows numbers.
  void Check(bool ok, std::string note) {
    if (!ok) {
      pass = false;
      note = "MISMATCH " + note;
    }
    notes.push_back(std::move(note));
  }
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct ChildStats {
  int exit_code = -1;
  double seconds = 0;
  long max_rss_kb = 0;
};

// Runs the CLI with stdout discarded; peak RSS comes from wait4.
ChildStats RunMeasured(const std::vector<std::string>& args) {
  std::vector<std::string> argv_storage{CONSENT_AUDIT_CLI};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  argv.push_back(nullptr);
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, "/dev/null", O_WRONLY, 0);
  ChildStats stats;
  auto start = Clock::now();
  pid_t pid;
  if (posix_spawn(&pid, argv[0], &actions, nullptr, argv.data(), environ) != 0) return stats;
  posix_spawn_file_actions_destroy(&actions);
  int status = 0;
  rusage usage{};
  wait4(pid, &status, 0, &usage);
  stats.seconds = Seconds(start);
  stats.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  stats.max_rss_kb = usage.ru_maxrss;
  return stats;
}

// ---- 1 ----
Outcome WaldInterval() {
  Outcome out;
  auto start = Clock::now();
  CommandResult r =
      RunCli({"metrics", "ci", "--k", "106", "--n", "955", "--level", "0.95", "--method", "wald"});
  double elapsed = Seconds(start);
  out.Check(r.exit_code == 0, fmt::format("exit {}", r.exit_code));
  auto doc = nlohmann::json::parse(r.out, nullptr, false);
  if (doc.is_discarded() || !doc.contains("lo")) {
    out.Check(false, "unparseable output");
    return out;
  }
  double lo = doc["lo"].get<double>(), hi = doc["hi"].get<double>();
  out.Check(std::abs(lo - 0.091) <= 0.001, fmt::format("lo {:.4f}", lo));
  out.Check(std::abs(hi - 0.131) <= 0.001, fmt::format("hi {:.4f}", hi));
  out.Check(elapsed < 1.0, fmt::format("{:.3f} s", elapsed));
  return out;
}

// ---- 2 ----
// Published rates are truncated to two decimals (51.136% is quoted as
// 51.13%), so prevalence is compared the same way, in integer arithmetic.
Outcome ScoreReconstruction() {
  Outcome out;
  ConfusionCounts c;
  c.tp = 90;
  c.fp = 174;
  c.fn = 86;
  c.tn = 958;
  std::vector<ScoredLabel> rows = GenerateScores(c, 1308);
  std::vector<double> scores;
  std::vector<bool> labels;
  for (const auto& row : rows) {
    scores.push_back(row.score);
    labels.push_back(row.label);
  }
  auto at = ThresholdMetrics(scores, labels, 0.5);
  if (!at.ok()) {
    out.Check(false, at.error().ToString());
    return out;
  }
  out.Check(at->counts == c, fmt::format("confusion at 0.5 tp={} fp={} fn={} tn={}", at->counts.tp,
                                         at->counts.fp, at->counts.fn, at->counts.tn));
  double precision = *at->prf.precision * 100, recall = *at->prf.recall * 100;
  out.Check(std::abs(precision - 34.09) <= 0.01, fmt::format("precision {:.4f}%", precision));
  out.Check(std::abs(recall - 51.13) <= 0.01, fmt::format("recall {:.4f}%", recall));
  std::uint64_t positives = c.tp + c.fn, total = c.total();
  std::uint64_t hundredths = positives * 10'000 / total;  // truncated
  out.Check(positives == 176 && total == 1308 && hundredths == 1345,
            fmt::format("prevalence {}/{} = {:.4f}% (two decimals truncated: {}.{:02})", positives,
                        total, 100.0 * positives / total, hundredths / 100, hundredths % 100));
  return out;
}

// ---- 3 ----
Outcome Extrapolation() {
  Outcome out;
  auto full = Extrapolate(1.22e6, 128e6, 12.8e9);
  out.Check(full.ok() && *full == 1.22e8, fmt::format("{:.6g}", full.ok() ? *full : -1));
  auto medium = Extrapolate(123'096, 12.8e6, 128e6);
  double rel = std::abs(*medium - 1.22e6) / 1.22e6;
  out.Check(rel < 0.01, fmt::format("123,096 -> {:.0f} vs 1.22M ({:.2f}%)", *medium, rel * 100));
  return out;
}

// ---- 4 ----
Outcome RobotsSuite() {
  Outcome out;
  auto start = Clock::now();
  auto cases = LoadHandwrittenCases();
  std::set<std::string> files, agent_verdicts, aggregate_verdicts;
  int agree = 0;
  for (const auto& c : cases) {
    files.insert(c.file);
    (c.agent == "@all" ? aggregate_verdicts : agent_verdicts).insert(c.expected);
    if (EvaluateCase(c) == c.expected) ++agree;
  }
  out.Check(files.size() >= 25, fmt::format("{} files", files.size()));
  out.Check(agree == static_cast<int>(cases.size()),
            fmt::format("{}/{} verdicts", agree, cases.size()));
  out.Check(agent_verdicts.size() == 4 && aggregate_verdicts.size() == 4,
            "every verdict and aggregation branch");
  int equal = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Census census = MakeCensus(seed);
    equal += TallyObservations(census.docs, census.weights, BuiltinAgentList()) ==
             NaiveTally(census.docs, census.weights, BuiltinAgentList());
  }
  out.Check(equal == 50, fmt::format("30-domain census = naive oracle on {}/50 seeds", equal));
  double elapsed = Seconds(start);
  out.Check(elapsed < 5.0, fmt::format("{:.2f} s", elapsed));
  return out;
}

// ---- 5 ----
Outcome BaseDomains() {
  Outcome out;
  auto rules = SuffixRules::LoadDefault();
  if (!rules.ok()) {
    out.Check(false, rules.error().ToString());
    return out;
  }
  auto base = [&](const std::string& host) {
    return ExtractBaseDomain(FullDomain{host, IsIpv4Literal(host)}, *rules).domain;
  };
  auto full = ExtractFullDomain("https://i.pinimg.com/236x/a.jpg");
  bool pinimg = full.ok() && full->host == "i.pinimg.com" && base("i.pinimg.com") == "pinimg.com" &&
                base("i-h1.pinimg.com") == "pinimg.com" && base("pinimg.com") == "pinimg.com";
  DomainCounter counter;
  for (const char* host :
       {"i.pinimg.com", "i.pinimg.com", "i.pinimg.com", "i-h1.pinimg.com", "i-h1.pinimg.com"}) {
    FullDomain f{host, false};
    counter.Add(f, ExtractBaseDomain(f, *rules));
  }
  pinimg = pinimg && counter.base_counts().at("pinimg.com") == 5 &&
           counter.base_to_full().at("pinimg.com").size() == 2;
  out.Check(pinimg, "pinimg examples");

  NaiveSuffixOracle oracle(ReadFile(DefaultSuffixListPath()));
  std::size_t idempotent = 0, oracle_agree = 0;
  auto hosts = HostCorpus(oracle, 10'000, 2);
  for (const auto& host : hosts) {
    std::string once = base(host);
    idempotent += base(once) == once;
    oracle_agree += once == oracle.Registrable(host);
  }
  out.Check(idempotent == hosts.size(), fmt::format("idempotent {}/{}", idempotent, hosts.size()));
  out.Check(oracle_agree == hosts.size() &&
                base("static.photos.example.co.uk") == "example.co.uk" &&
                oracle.Registrable("static.photos.example.co.uk") == "example.co.uk",
            fmt::format("longest-suffix oracle {}/{}", oracle_agree, hosts.size()));
  return out;
}

// ---- 6 ----
Outcome PatternEngine() {
  Outcome out;
  auto corpus = LoadLabeledCorpus();
  std::size_t agree = 0;
  std::set<std::string> required = {"© John Doe 2025", "copr. 1999", "copper wire"};
  for (const auto& row : corpus) {
    agree += Categories(ScanText(row.text, DefaultPatternSet())) == row.labels;
    required.erase(row.text);
  }
  out.Check(corpus.size() == 200 && agree == 200,
            fmt::format("labeled corpus {}/{}", agree, corpus.size()));
  out.Check(required.empty(), "named strings present");
  std::set<std::string> families;
  for (const auto& row : corpus) {
    for (const char* f : {"BY-NC-SA", "BY-NC-ND", "BY-NC", "BY-SA", "BY-ND"}) {
      if (row.text.find(f) != std::string::npos) {
        families.insert(f);
        break;
      }
    }
    if (row.text.find("CC BY ") != std::string::npos) families.insert("BY");
  }
  out.Check(families.size() == 6, fmt::format("{} CC families", families.size()));

  CorpusSpec spec = ScaledSpec(1000, 4);
  spec.plan = ChannelPlan{40, 30, 50, 12, 9, 7, 5};
  spec.raw_exif_rate = 0.3;
  std::vector<Sample> samples = GenerateCorpus(spec, nullptr);
  std::set<std::string> a, b, c, all;
  std::uint64_t any = 0;
  for (const auto& s : samples) {
    ConsentFlags flags = ScanSampleText(s, DefaultPatternSet());
    flags.exif_hit = FindExifCopyright(s).copyright.has_value();
    if (flags.caption_hit) a.insert(s.uid);
    if (flags.ocr_hit) b.insert(s.uid);
    if (flags.exif_hit) c.insert(s.uid);
    any += flags.any();
  }
  all = a;
  all.insert(b.begin(), b.end());
  all.insert(c.begin(), c.end());
  out.Check(
      any == all.size() && all.size() == spec.plan.any(),
      fmt::format("|A∪B∪C| {} = brute force {} = planted {}", any, all.size(), spec.plan.any()));
  return out;
}

// ---- 7 ----
Outcome ExifParser() {
  Outcome out;
  std::mt19937_64 rng(7);
  int round_trips = 0, total = 0;
  for (bool big_endian : {false, true}) {
    for (const std::string value :
         {"Acme", "(c) 2021 Acme Corp", "Jane Doe, all rights reserved"}) {
      std::string stored = value + std::string(1, '\0');
      std::vector<Entry> entries = {{0x010F, 2, std::string("Cam\0", 4)},
                                    {kExifCopyrightTag, 2, stored}};
      for (const Bytes& bytes :
           {WriteTiff(entries, big_endian), WrapJpeg(WriteTiff(entries, big_endian))}) {
        ++total;
        auto parsed = ParseExifCopyright(bytes);
        round_trips += parsed.ok() && parsed->has_value() && (*parsed)->value == value;
      }
    }
  }
  for (const char* file : {"acme_le.tif", "acme_be.tif"}) {
    std::string data = ReadFile(FixturePath(std::string("exif/") + file));
    auto parsed = ParseExifCopyright(Bytes(data.begin(), data.end()));
    ++total;
    round_trips += parsed.ok() && parsed->has_value() && !(*parsed)->value.empty();
  }
  out.Check(round_trips == total, fmt::format("round trips {}/{}", round_trips, total));

  auto start = Clock::now();
  std::vector<Bytes> seeds = {WriteTiff({{kExifCopyrightTag, 2, "0123456789"}}, true),
                              WrapJpeg(WriteTiff({{kExifCopyrightTag, 2, "abcdefgh"}}, false))};
  std::uint64_t values = 0, errors = 0;
  constexpr int kIterations = 1'000'000;
  for (int i = 0; i < kIterations; ++i) {
    Bytes buf;
    if (i % 2 == 0) {
      buf.resize(rng() % 96);
      for (auto& byte : buf) byte = static_cast<std::uint8_t>(rng());
      if (buf.size() >= 4 && rng() % 2) buf[0] = 'I', buf[1] = 'I', buf[2] = 42, buf[3] = 0;
    } else {
      buf = seeds[rng() % seeds.size()];
      for (int k = 1 + static_cast<int>(rng() % 4); k > 0; --k) {
        buf[rng() % buf.size()] = static_cast<std::uint8_t>(rng());
      }
      if (rng() % 3 == 0) buf.resize(rng() % (buf.size() + 1));
    }
    // Exact-size heap block: sanitizer builds trap any read past the end.
    std::unique_ptr<std::uint8_t[]> exact(new std::uint8_t[buf.size()]);
    std::copy(buf.begin(), buf.end(), exact.get());
    auto parsed = ParseExifCopyright(std::span<const std::uint8_t>(exact.get(), buf.size()));
    if (!parsed.ok()) {
      ++errors;
    } else if (parsed->has_value()) {
      ++values;
    }
  }
  out.Check(true, fmt::format("fuzz {} iterations, no crash ({} values, {} errors, {:.1f} s)",
                              kIterations, values, errors, Seconds(start)));
  return out;
}

// ---- 8 ----
Outcome TosWeighting() {
  Outcome out;
  auto annotations = LoadAnnotations(FixturePath("tos/annotations.csv"));
  auto weights = ReadDomainWeights(FixturePath("tos/counts.csv"), "base_domain");
  if (!annotations.ok() || !weights.ok()) {
    out.Check(false, "fixture load");
    return out;
  }
  std::map<std::string, std::uint64_t> counts(weights->counts.begin(), weights->counts.end());
  auto share = [&](TosAttribute attribute, std::string_view value) {
    auto shares = WeightedDistribution(*annotations, counts, attribute);
    for (const auto& s : *shares) {
      if (s.value == value) return fmt::format("{:.1f}", s.share * 100);
    }
    return std::string("?");
  };
  std::string a = share(TosAttribute::kScrapingPolicy, "No scraping");
  std::string b = share(TosAttribute::kScrapingPolicy, "No scraping and AI");
  std::string c = share(TosAttribute::kLicenseType, "Personal/Noncommercial/Research Only");
  std::string d = share(TosAttribute::kLicenseType, "Not Applicable");
  out.Check(a == "57.1" && b == "3.2" && c == "33.4" && d == "46.9",
            fmt::format("{} / {} / {} / {}", a, b, c, d));
  std::mt19937_64 rng(8);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    for (auto& [domain, n] : counts) n = rng() % 10'000'000;
    counts.begin()->second += 1;
    for (auto attribute :
         {TosAttribute::kCategory, TosAttribute::kLicenseType, TosAttribute::kScrapingPolicy}) {
      double sum = 0;
      auto shares = WeightedDistribution(*annotations, counts, attribute);
      for (const auto& s : *shares) sum += s.share;
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  out.Check(worst <= 1e-9, fmt::format("max |sum-1| {:.1e} over 3000 distributions", worst));
  return out;
}

// ---- 9 ----
std::map<std::string, std::uint64_t> TableThreeCounts(const std::filesystem::path& csv) {
  std::map<std::string, std::uint64_t> counts;
  std::ifstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.starts_with("measure,")) continue;
    auto fields = SplitView(line, ',');
    counts[std::string(fields[0])] = std::stoull(std::string(fields[1]));
  }
  return counts;
}

Outcome Throughput() {
  Outcome out;
  ScratchDir dir;
  std::map<std::uint64_t, ChildStats> runs;
  for (std::uint64_t n : {10'000ULL, 1'000'000ULL}) {
    auto input = dir / fmt::format("corpus_{}.jsonl", n);
    CorpusTruth truth;
    {
      std::ofstream file(input, std::ios::binary);
      truth = WriteCorpus(ScaledSpec(n, 9), file);
    }
    auto out_dir = dir / fmt::format("out_{}", n);
    int jobs = static_cast<int>(std::max(4u, std::thread::hardware_concurrency()));
    runs[n] = RunMeasured({"--input", input.string(), "--out-dir", out_dir.string(), "--jobs",
                           std::to_string(jobs), "scan"});
    auto counts = TableThreeCounts(out_dir / "table3.csv");
    out.Check(runs[n].exit_code == 0 && counts["Caption"] == truth.caption &&
                  counts["OCR"] == truth.ocr && counts["EXIF Metadata"] == truth.exif,
              fmt::format("{} records: counts match truth", n));
    std::filesystem::remove(input);
  }
  const ChildStats& big = runs[1'000'000];
  const ChildStats& small = runs[10'000];
  out.Check(big.seconds < 60, fmt::format("1M records in {:.1f} s ({} cores)", big.seconds,
                                          std::thread::hardware_concurrency()));
  double ratio = static_cast<double>(big.max_rss_kb) / static_cast<double>(small.max_rss_kb);
  out.Check(ratio <= 2.0, fmt::format("peak RSS {:.1f} MB vs {:.1f} MB ({:.2f}x)",
                                      big.max_rss_kb / 1024.0, small.max_rss_kb / 1024.0, ratio));
  return out;
}

// ---- 10 ----
Outcome PolitenessAndDeterminism() {
  Outcome out;
  constexpr int kDelayMs = 100;
  StubRobotsServer server(std::chrono::milliseconds(10));
  // Six hosts redirect to one shared host, so eight workers contend for it.
  std::vector<std::string> hosts;
  server.Set("hub.test", "/robots.txt", {200, "User-agent: GPTBot\nDisallow: /\n", ""});
  server.Set("hub.test", "/b.txt", {200, "User-agent: *\nDisallow: /x\n", ""});
  for (int i = 0; i < 6; ++i) {
    std::string host = fmt::format("a{}.test", i);
    hosts.push_back(host);
    server.Set(host, "/robots.txt",
               {301, "", i % 2 ? "http://hub.test/robots.txt" : "http://hub.test/b.txt"});
  }
  hosts.push_back("hub.test");
  hosts.push_back("empty.test");
  server.Set("empty.test", "/robots.txt", {200, "", ""});
  hosts.push_back("missing.test");

  ScratchDir dir;
  std::ostringstream domains;
  domains << "full_domain,base_domain,count\n";
  int weight = 1;
  for (const auto& host : hosts) domains << host << "," << host << "," << weight++ << "\n";
  WriteFile(dir / "full_domains.csv", domains.str());
  std::vector<std::string> fetch = {"robots",        "fetch",
                                    "--domains",     (dir / "full_domains.csv").string(),
                                    "--cache",       (dir / "cache").string(),
                                    "--concurrency", "8",
                                    "--delay-ms",    std::to_string(kDelayMs),
                                    "--timeout-ms",  "3000"};
  for (const auto& host : hosts) {
    fetch.push_back("--resolve");
    fetch.push_back(host + "=" + server.address());
  }
  CommandResult fetched = RunCli(fetch);
  out.Check(fetched.exit_code == 0, fmt::format("fetch exit {}", fetched.exit_code));
  PolitenessReport report = CheckPoliteness(server.visits());
  out.Check(!report.overlap, fmt::format("{} same-host request pairs, no overlap", report.pairs));
  out.Check(report.pairs >= 6 && report.min_gap >= std::chrono::milliseconds(kDelayMs),
            fmt::format("min same-host gap {:.1f} ms >= {} ms", report.min_gap.count() / 1000.0,
                        kDelayMs));

  std::string tables[2];
  for (int run = 0; run < 2; ++run) {
    auto out_csv = dir / fmt::format("run{}", run) / "table5.csv";
    std::filesystem::create_directories(out_csv.parent_path());
    CommandResult analyzed =
        RunCli({"--offline", "robots", "analyze", "--cache", (dir / "cache").string(), "--weights",
                (dir / "full_domains.csv").string(), "--out", out_csv.string()});
    out.Check(analyzed.exit_code == 0,
              fmt::format("analyze run {} exit {}", run, analyzed.exit_code));
    auto md = out_csv;
    md.replace_extension(".md");
    tables[run] = ReadFile(out_csv) + ReadFile(md);
  }
  bool has_rows = tables[0].find("GPTBot,1,1,") != std::string::npos;
  out.Check(!tables[0].empty() && has_rows && tables[0] == tables[1],
            fmt::format("offline runs byte-identical ({} bytes)", tables[0].size()));
  return out;
}

struct Criterion {
  int number;
  const char* name;
  std::function<Outcome()> run;
};

int Main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "Wald interval", WaldInterval},
      {2, "score reconstruction", ScoreReconstruction},
      {3, "extrapolation", Extrapolation},
      {4, "robots classification", RobotsSuite},
      {5, "base domains", BaseDomains},
      {6, "pattern engine", PatternEngine},
      {7, "EXIF parser", ExifParser},
      {8, "ToS weighting", TosWeighting},
      {9, "throughput", Throughput},
      {10, "politeness and determinism", PolitenessAndDeterminism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& criterion : criteria) {
    if (!only.empty() && !only.contains(criterion.number)) continue;
    auto start = Clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome.Check(false, std::string("exception: ") + e.what());
    }
    std::string notes;
    for (const auto& note : outcome.notes) notes += (notes.empty() ? "" : "; ") + note;
    std::cout << fmt::format("criterion {:>2} {:<27} {}  [{:.2f} s] {}\n", criterion.number,
                             criterion.name, outcome.pass ? "PASS" : "FAIL", Seconds(start), notes)
              << std::flush;
    failures += !outcome.pass;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace consent_audit::testing

int main(int argc, char** argv) { return consent_audit::testing::Main(argc, argv); }
