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

// robots.txt retrieval: a polite fetcher with a bounded worker pool and an
// append-only on-disk cache that supports fully offline re-analysis.
//
// Cache layout:
//   <cache>/index.tsv                       one line per fetch attempt
//   <cache>/<host>/<fetched_at>-<sha256>.txt  body of each successful fetch

#ifndef CONSENT_AUDIT_ROBOTS_FETCH_H_
#define CONSENT_AUDIT_ROBOTS_FETCH_H_

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "consent_audit/result.h"
#include "consent_audit/url.h"

namespace consent_audit {

struct FetchPolicy {
  std::chrono::milliseconds timeout{10'000};
  int max_redirects = 5;
  std::chrono::milliseconds per_host_delay{1'000};
  int max_concurrency = 8;
  std::vector<std::string> schemes{"https", "http"};
  std::filesystem::path cache_dir;
  bool offline = false;
  std::string user_agent = "consent-audit/" CONSENT_AUDIT_VERSION " (robots.txt census)";
  // host -> "address:port" to connect to instead of resolving the host.
  std::map<std::string, std::string> resolve;

  // timeout > 0, max_concurrency >= 1, offline requires a cache dir.
  std::optional<Error> Validate() const;
};

// "<scheme>://<host>/robots.txt"; IPv6 hosts are bracketed.
std::string RobotsUrl(std::string_view host, std::string_view scheme);

struct HttpResponse {
  int status = 0;  // 0 = no HTTP response (DNS, connect, TLS, timeout)
  std::string body;
  std::string location;
  std::string error;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse Get(const ParsedUrl& url, const FetchPolicy& policy) = 0;
};

// cpp-httplib backed transport (HTTP and HTTPS).
class HttplibTransport : public HttpTransport {
 public:
  HttpResponse Get(const ParsedUrl& url, const FetchPolicy& policy) override;
};

enum class FetchStatus { kSuccess, kEmpty, kUnreachable };

std::string_view FetchStatusName(FetchStatus status);
std::optional<FetchStatus> ParseFetchStatus(std::string_view name);

struct FetchResult {
  std::string host;
  FetchStatus status = FetchStatus::kUnreachable;
  std::string body;       // kSuccess only
  std::string final_url;  // last URL requested
  std::string reason;     // kUnreachable: why
  std::string fetched_at;
  std::string digest;  // sha256 of body
  std::string user_agent;
  std::optional<Error> cache_error;
};

struct CacheEntry {
  std::string host;
  FetchStatus status = FetchStatus::kUnreachable;
  std::string fetched_at;
  std::string digest;
  std::string file;  // relative to the cache dir; empty unless kSuccess
  std::string final_url;
  std::string user_agent;
  std::string reason;
};

class RobotsCache {
 public:
  explicit RobotsCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  // Writes the body (kSuccess) and appends an index line. Thread-safe.
  std::optional<Error> Store(const FetchResult& result);

  // Latest entry per host; later index lines win.
  Result<std::map<std::string, CacheEntry>> LoadIndex() const;
  Result<std::string> ReadBody(const CacheEntry& entry) const;

  // Newest fetched_at across the index, empty for an empty cache.
  Result<std::string> SnapshotTimestamp() const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::mutex mu_;
};

// At most one in-flight request per host, and at least `delay` between the
// end of one request and the start of the next to the same host.
class HostGate {
 public:
  explicit HostGate(std::chrono::milliseconds delay) : delay_(delay) {}

  void Acquire(const std::string& host);
  void Release(const std::string& host);

 private:
  struct State {
    bool busy = false;
    std::optional<std::chrono::steady_clock::time_point> last_end;
  };
  std::chrono::milliseconds delay_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::unordered_map<std::string, State> hosts_;
};

class RobotsFetcher {
 public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;

  RobotsFetcher(FetchPolicy policy, HttpTransport& transport);
  RobotsFetcher(FetchPolicy policy, HttpTransport& transport, Clock clock);

  // One host: https then http on Unreachable (Empty does not fall through),
  // redirects followed up to the policy limit. Offline mode answers from the
  // cache only. The result is stored in the cache when one is configured.
  FetchResult Fetch(const std::string& host);

  // All hosts on max_concurrency workers; results in input order.
  std::vector<FetchResult> FetchAll(const std::vector<std::string>& hosts);

 private:
  FetchResult FetchOnline(const std::string& host);
  FetchResult FetchOffline(const std::string& host);
  std::string Timestamp() const;

  FetchPolicy policy_;
  HttpTransport& transport_;
  Clock clock_;
  HostGate gate_;
  std::optional<RobotsCache> cache_;
  std::optional<std::map<std::string, CacheEntry>> offline_index_;
};

// "20261019T081500123Z": UTC, millisecond precision, sorts lexically.
std::string FormatTimestamp(std::chrono::system_clock::time_point time);

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_ROBOTS_FETCH_H_
