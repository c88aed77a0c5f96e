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

#include "consent_audit/robots_fetch.h"

#include <fmt/format.h>

#include <atomic>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "consent_audit/codec.h"
#include "consent_audit/strings.h"
#include "httplib.h"

namespace consent_audit {
namespace {

constexpr char kIndexName[] = "index.tsv";
constexpr char kIndexHeader[] =
    "host\tstatus\tfetched_at\tdigest\tfile\tfinal_url\tuser_agent\treason";

std::string TsvField(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

bool IsRedirect(int status) {
  return status == 301 || status == 302 || status == 303 || status == 307 || status == 308;
}

// Resolves a Location header against the URL that produced it.
std::string ResolveLocation(const ParsedUrl& base, std::string_view location) {
  location = TrimAscii(location);
  if (location.find("://") != std::string_view::npos) return std::string(location);
  std::string authority =
      base.host.find(':') != std::string::npos ? "[" + base.host + "]" : base.host;
  if (base.port) authority += fmt::format(":{}", *base.port);
  if (location.starts_with("//")) return base.scheme + ":" + std::string(location);
  if (location.starts_with("/")) {
    return fmt::format("{}://{}{}", base.scheme, authority, location);
  }
  std::string path = base.path_and_query.substr(0, base.path_and_query.find_first_of("?#"));
  path = path.substr(0, path.rfind('/') + 1);
  if (path.empty()) path = "/";
  return fmt::format("{}://{}{}{}", base.scheme, authority, path, location);
}

}  // namespace

std::optional<Error> FetchPolicy::Validate() const {
  if (timeout.count() <= 0) return MakeError(ErrorCode::kConfigError, "timeout must be > 0");
  if (max_concurrency < 1) {
    return MakeError(ErrorCode::kConfigError, "max_concurrency must be >= 1");
  }
  if (max_redirects < 0) return MakeError(ErrorCode::kConfigError, "max_redirects must be >= 0");
  if (per_host_delay.count() < 0) {
    return MakeError(ErrorCode::kConfigError, "per_host_delay must be >= 0");
  }
  if (schemes.empty()) return MakeError(ErrorCode::kConfigError, "no schemes");
  for (const auto& scheme : schemes) {
    if (scheme != "http" && scheme != "https") {
      return MakeError(ErrorCode::kConfigError, "unsupported scheme " + scheme);
    }
  }
  if (offline && cache_dir.empty()) {
    return MakeError(ErrorCode::kConfigError, "offline mode needs a cache directory");
  }
  return std::nullopt;
}

std::string RobotsUrl(std::string_view host, std::string_view scheme) {
  if (host.find(':') != std::string_view::npos) {
    return fmt::format("{}://[{}]/robots.txt", scheme, host);
  }
  return fmt::format("{}://{}/robots.txt", scheme, host);
}

HttpResponse HttplibTransport::Get(const ParsedUrl& url, const FetchPolicy& policy) {
  std::string authority = url.host.find(':') != std::string::npos ? "[" + url.host + "]" : url.host;
  if (url.port) authority += fmt::format(":{}", *url.port);
  std::string connect_to = authority;
  if (auto it = policy.resolve.find(url.host); it != policy.resolve.end()) {
    connect_to = it->second;
  }

  httplib::Client client(url.scheme + "://" + connect_to);
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(policy.timeout);
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(policy.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  client.set_follow_location(false);
  client.set_keep_alive(false);

  httplib::Headers headers{{"User-Agent", policy.user_agent}, {"Host", authority}};
  std::string path = url.path_and_query.empty() ? "/" : url.path_and_query;
  auto res = client.Get(path, headers);

  HttpResponse response;
  if (!res) {
    response.error = httplib::to_string(res.error());
    return response;
  }
  response.status = res->status;
  response.body = std::move(res->body);
  response.location = res->get_header_value("Location");
  return response;
}

std::string_view FetchStatusName(FetchStatus status) {
  switch (status) {
    case FetchStatus::kSuccess: return "success";
    case FetchStatus::kEmpty: return "empty";
    case FetchStatus::kUnreachable: return "unreachable";
  }
  return "";
}

std::optional<FetchStatus> ParseFetchStatus(std::string_view name) {
  for (auto s : {FetchStatus::kSuccess, FetchStatus::kEmpty, FetchStatus::kUnreachable}) {
    if (FetchStatusName(s) == name) return s;
  }
  return std::nullopt;
}

std::string FormatTimestamp(std::chrono::system_clock::time_point time) {
  auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(time.time_since_epoch());
  std::time_t seconds = static_cast<std::time_t>(millis.count() / 1000);
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  return fmt::format("{:04}{:02}{:02}T{:02}{:02}{:02}{:03}Z", utc.tm_year + 1900, utc.tm_mon + 1,
                     utc.tm_mday, utc.tm_hour, utc.tm_min, utc.tm_sec, millis.count() % 1000);
}

std::optional<Error> RobotsCache::Store(const FetchResult& result) {
  std::lock_guard lock(mu_);
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) return MakeError(ErrorCode::kCacheWriteError, dir_.string() + ": " + ec.message());

  std::string file;
  if (result.status == FetchStatus::kSuccess) {
    std::filesystem::path relative =
        std::filesystem::path(result.host) / (result.fetched_at + "-" + result.digest + ".txt");
    std::filesystem::create_directories(dir_ / result.host, ec);
    if (ec) {
      return MakeError(ErrorCode::kCacheWriteError,
                       (dir_ / result.host).string() + ": " + ec.message());
    }
    std::ofstream out(dir_ / relative, std::ios::binary);
    out << result.body;
    if (!out) return MakeError(ErrorCode::kCacheWriteError, (dir_ / relative).string());
    file = relative.generic_string();
  }

  std::filesystem::path index = dir_ / kIndexName;
  bool fresh = !std::filesystem::exists(index);
  std::ofstream out(index, std::ios::binary | std::ios::app);
  if (fresh) out << kIndexHeader << '\n';
  out << TsvField(result.host) << '\t' << FetchStatusName(result.status) << '\t'
      << result.fetched_at << '\t' << result.digest << '\t' << TsvField(file) << '\t'
      << TsvField(result.final_url) << '\t' << TsvField(result.user_agent) << '\t'
      << TsvField(result.reason) << '\n';
  if (!out) return MakeError(ErrorCode::kCacheWriteError, index.string());
  return std::nullopt;
}

Result<std::map<std::string, CacheEntry>> RobotsCache::LoadIndex() const {
  std::map<std::string, CacheEntry> entries;
  std::ifstream in(dir_ / kIndexName, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(dir_ / kIndexName)) return entries;
    return MakeError(ErrorCode::kIoError, "cannot read " + (dir_ / kIndexName).string());
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    auto fields = SplitView(line, '\t');
    if (fields.size() != 8) {
      return MakeError(ErrorCode::kMalformedLine,
                       fmt::format("{}:{}: expected 8 fields", kIndexName, line_no));
    }
    auto status = ParseFetchStatus(fields[1]);
    if (!status) {
      return MakeError(ErrorCode::kMalformedLine,
                       fmt::format("{}:{}: bad status", kIndexName, line_no));
    }
    CacheEntry entry{std::string(fields[0]), *status,
                     std::string(fields[2]), std::string(fields[3]),
                     std::string(fields[4]), std::string(fields[5]),
                     std::string(fields[6]), std::string(fields[7])};
    auto it = entries.find(entry.host);
    if (it == entries.end() || it->second.fetched_at <= entry.fetched_at) {
      entries[entry.host] = std::move(entry);
    }
  }
  return entries;
}

Result<std::string> RobotsCache::ReadBody(const CacheEntry& entry) const {
  if (entry.file.empty()) return MakeError(ErrorCode::kIoError, entry.host + ": no cached body");
  std::ifstream in(dir_ / entry.file, std::ios::binary);
  if (!in) return MakeError(ErrorCode::kIoError, "cannot read " + (dir_ / entry.file).string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Result<std::string> RobotsCache::SnapshotTimestamp() const {
  auto index = LoadIndex();
  if (!index.ok()) return index.error();
  std::string latest;
  for (const auto& [host, entry] : *index) latest = std::max(latest, entry.fetched_at);
  return latest;
}

void HostGate::Acquire(const std::string& host) {
  std::unique_lock lock(mu_);
  while (true) {
    State& state = hosts_[host];
    if (!state.busy) {
      auto now = std::chrono::steady_clock::now();
      if (!state.last_end || now >= *state.last_end + delay_) {
        state.busy = true;
        return;
      }
      cv_.wait_until(lock, *state.last_end + delay_);
    } else {
      cv_.wait(lock);
    }
  }
}

void HostGate::Release(const std::string& host) {
  {
    std::lock_guard lock(mu_);
    State& state = hosts_[host];
    state.busy = false;
    state.last_end = std::chrono::steady_clock::now();
  }
  cv_.notify_all();
}

RobotsFetcher::RobotsFetcher(FetchPolicy policy, HttpTransport& transport)
    : RobotsFetcher(std::move(policy), transport, [] { return std::chrono::system_clock::now(); }) {
}

RobotsFetcher::RobotsFetcher(FetchPolicy policy, HttpTransport& transport, Clock clock)
    : policy_(std::move(policy)),
      transport_(transport),
      clock_(std::move(clock)),
      gate_(policy_.per_host_delay) {
  if (!policy_.cache_dir.empty()) cache_.emplace(policy_.cache_dir);
}

std::string RobotsFetcher::Timestamp() const { return FormatTimestamp(clock_()); }

FetchResult RobotsFetcher::Fetch(const std::string& host) {
  if (policy_.offline) return FetchOffline(host);
  FetchResult result = FetchOnline(host);
  if (cache_) result.cache_error = cache_->Store(result);
  return result;
}

FetchResult RobotsFetcher::FetchOnline(const std::string& host) {
  FetchResult result;
  result.host = host;
  result.user_agent = policy_.user_agent;
  std::vector<std::string> reasons;

  for (const auto& scheme : policy_.schemes) {
    std::string url = RobotsUrl(host, scheme);
    HttpResponse response;
    int redirects = 0;
    bool unreachable = false;
    while (true) {
      auto parsed = ParseUrl(url);
      if (!parsed.ok()) {
        reasons.push_back(fmt::format("{}: {}", url, parsed.error().message));
        unreachable = true;
        break;
      }
      result.final_url = url;
      gate_.Acquire(parsed->host);
      response = transport_.Get(*parsed, policy_);
      gate_.Release(parsed->host);

      if (IsRedirect(response.status) && !response.location.empty()) {
        if (redirects >= policy_.max_redirects) {
          reasons.push_back(fmt::format("{}: too many redirects", url));
          unreachable = true;
          break;
        }
        ++redirects;
        url = ResolveLocation(*parsed, response.location);
        continue;
      }
      break;
    }
    if (unreachable) continue;
    if (response.status == 200) {
      result.fetched_at = Timestamp();
      if (IsBlank(response.body)) {
        result.status = FetchStatus::kEmpty;
      } else {
        result.status = FetchStatus::kSuccess;
        result.digest = Sha256Hex(response.body);
        result.body = std::move(response.body);
      }
      return result;
    }
    reasons.push_back(response.status == 0 ? fmt::format("{}: {}", url, response.error)
                                           : fmt::format("{}: status {}", url, response.status));
  }
  result.status = FetchStatus::kUnreachable;
  result.fetched_at = Timestamp();
  for (std::size_t i = 0; i < reasons.size(); ++i) {
    if (i) result.reason += "; ";
    result.reason += reasons[i];
  }
  return result;
}

FetchResult RobotsFetcher::FetchOffline(const std::string& host) {
  FetchResult result;
  result.host = host;
  result.status = FetchStatus::kUnreachable;
  if (!offline_index_) {
    auto index = cache_ ? cache_->LoadIndex()
                        : Result<std::map<std::string, CacheEntry>>(
                              MakeError(ErrorCode::kConfigError, "no cache"));
    if (!index.ok()) {
      result.reason = "offline: " + index.error().ToString();
      return result;
    }
    offline_index_ = std::move(index).value();
  }
  auto it = offline_index_->find(host);
  if (it == offline_index_->end()) {
    result.reason = "offline: not cached";
    return result;
  }
  const CacheEntry& entry = it->second;
  result.status = entry.status;
  result.fetched_at = entry.fetched_at;
  result.digest = entry.digest;
  result.final_url = entry.final_url;
  result.user_agent = entry.user_agent;
  result.reason = entry.reason;
  if (entry.status == FetchStatus::kSuccess) {
    auto body = cache_->ReadBody(entry);
    if (!body.ok()) {
      result.status = FetchStatus::kUnreachable;
      result.reason = "offline: " + body.error().ToString();
    } else {
      result.body = std::move(body).value();
    }
  }
  return result;
}

std::vector<FetchResult> RobotsFetcher::FetchAll(const std::vector<std::string>& hosts) {
  std::vector<FetchResult> results(hosts.size());
  std::size_t first = 0;
  if (policy_.offline && !offline_index_ && !hosts.empty()) {
    results[0] = FetchOffline(hosts[0]);  // loads the index once, before fan-out
    first = 1;
  }
  std::atomic<std::size_t> next{first};
  auto worker = [&] {
    for (std::size_t i = next++; i < hosts.size(); i = next++) results[i] = Fetch(hosts[i]);
  };
  std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(policy_.max_concurrency), hosts.size());
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < workers; ++i) threads.emplace_back(worker);
  for (auto& thread : threads) thread.join();
  return results;
}

}  // namespace consent_audit
