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

// Detection-evaluation arithmetic over externally supplied scores and labels.

#ifndef CONSENT_AUDIT_METRICS_H_
#define CONSENT_AUDIT_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "consent_audit/result.h"
#include "consent_audit/types.h"

namespace consent_audit {

struct Prf {
  double accuracy = 0.0;
  std::optional<double> precision;  // undefined when tp + fp == 0
  std::optional<double> recall;     // undefined when tp + fn == 0
  double f1 = 0.0;                  // 0 unless precision and recall are both defined and > 0
};

// EmptyCounts when total() == 0.
Result<Prf> ComputePrf(const ConfusionCounts& counts);

// P(score+ > score-) + P(score+ == score-) / 2, computed from average ranks.
// InvalidArgument on length mismatch or NaN; DegenerateLabels without both
// classes.
Result<double> RocAuc(std::span<const double> scores, const std::vector<bool>& labels);

enum class CiMethod { kWald, kWilson };

std::string_view CiMethodName(CiMethod method);
std::optional<CiMethod> ParseCiMethod(std::string_view name);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Two-sided interval for k successes of n. Wald is clipped to [0, 1].
// InvalidLevel unless 0 < level < 1; InvalidArgument unless 0 <= k <= n, n >= 1.
Result<Interval> BinomialCi(std::uint64_t k, std::uint64_t n, double level,
                            CiMethod method = CiMethod::kWald);

struct ThresholdResult {
  ConfusionCounts counts;
  Prf prf;
};

// Predicts positive when score >= threshold.
Result<ThresholdResult> ThresholdMetrics(std::span<const double> scores,
                                         const std::vector<bool>& labels, double threshold);

// count * (target_total / source_total). InvalidArgument unless source_total > 0.
Result<double> Extrapolate(double count, double source_total, double target_total);

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_METRICS_H_
