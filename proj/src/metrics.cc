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

#include "consent_audit/metrics.h"

#include <fmt/format.h>

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numeric>
#include <vector>

#include "consent_audit/strings.h"

namespace consent_audit {
namespace {

std::optional<Error> CheckScores(std::span<const double> scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) {
    return MakeError(ErrorCode::kInvalidArgument,
                     fmt::format("{} scores vs {} labels", scores.size(), labels.size()));
  }
  for (double score : scores) {
    if (std::isnan(score)) return MakeError(ErrorCode::kInvalidArgument, "NaN score");
  }
  return std::nullopt;
}

}  // namespace

Result<Prf> ComputePrf(const ConfusionCounts& c) {
  if (c.total() == 0) return MakeError(ErrorCode::kEmptyCounts, "tp+fp+tn+fn == 0");
  Prf prf;
  prf.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  if (c.tp + c.fp > 0) prf.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) prf.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (prf.precision && prf.recall && *prf.precision + *prf.recall > 0) {
    prf.f1 = 2 * *prf.precision * *prf.recall / (*prf.precision + *prf.recall);
  }
  return prf;
}

Result<double> RocAuc(std::span<const double> scores, const std::vector<bool>& labels) {
  if (auto error = CheckScores(scores, labels)) return *error;
  std::uint64_t positives = std::count(labels.begin(), labels.end(), true);
  std::uint64_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    return MakeError(ErrorCode::kDegenerateLabels,
                     fmt::format("{} positives, {} negatives", positives, negatives));
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of 1-based average ranks of the positives; ties share their mean rank.
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    double average_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]]) positive_rank_sum += average_rank;
    }
    i = j;
  }
  double p = static_cast<double>(positives);
  double u = positive_rank_sum - p * (p + 1) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

std::string_view CiMethodName(CiMethod method) {
  return method == CiMethod::kWald ? "wald" : "wilson";
}

std::optional<CiMethod> ParseCiMethod(std::string_view name) {
  if (EqualsIgnoreAsciiCase(name, "wald")) return CiMethod::kWald;
  if (EqualsIgnoreAsciiCase(name, "wilson")) return CiMethod::kWilson;
  return std::nullopt;
}

Result<Interval> BinomialCi(std::uint64_t k, std::uint64_t n, double level, CiMethod method) {
  if (!(level > 0.0 && level < 1.0)) {
    return MakeError(ErrorCode::kInvalidLevel, fmt::format("level {} not in (0, 1)", level));
  }
  if (n == 0 || k > n) {
    return MakeError(ErrorCode::kInvalidArgument, fmt::format("k={} n={}", k, n));
  }
  double z =
      boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - (1.0 - level) / 2.0);
  double nn = static_cast<double>(n);
  double p = static_cast<double>(k) / nn;
  if (method == CiMethod::kWald) {
    double half = z * std::sqrt(p * (1.0 - p) / nn);
    return Interval{std::max(0.0, p - half), std::min(1.0, p + half)};
  }
  double z2 = z * z;
  double denom = 1.0 + z2 / nn;
  double center = (p + z2 / (2.0 * nn)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  Interval interval{center - half, center + half};
  // The closed form is exact at the boundaries; pin away rounding residue.
  if (k == 0) interval.lo = 0.0;
  if (k == n) interval.hi = 1.0;
  return interval;
}

Result<ThresholdResult> ThresholdMetrics(std::span<const double> scores,
                                         const std::vector<bool>& labels, double threshold) {
  if (auto error = CheckScores(scores, labels)) return *error;
  ThresholdResult result;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    bool predicted = scores[i] >= threshold;
    if (predicted && labels[i]) ++result.counts.tp;
    if (predicted && !labels[i]) ++result.counts.fp;
    if (!predicted && labels[i]) ++result.counts.fn;
    if (!predicted && !labels[i]) ++result.counts.tn;
  }
  auto prf = ComputePrf(result.counts);
  if (!prf.ok()) return prf.error();
  result.prf = *prf;
  return result;
}

Result<double> Extrapolate(double count, double source_total, double target_total) {
  if (!(source_total > 0.0)) {
    return MakeError(ErrorCode::kInvalidArgument, "source_total must be > 0");
  }
  return count * (target_total / source_total);
}

}  // namespace consent_audit
