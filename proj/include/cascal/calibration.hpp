//
// Copyright 2026 The Cascal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef CASCAL_CALIBRATION_HPP_
#define CASCAL_CALIBRATION_HPP_

// Threshold selection for the cascade.
//
//   MhtErm     M parallel fixed-sequence chains (one per epsilon), each
//              tested from lambda = 1 downwards at level delta / M and
//              stopped at the first non-rejected null. The certified pairs
//              of all chains are pooled and the cheapest one is selected.
//   MhtErmB    Bonferroni over all M * Q pairs at level delta / (M Q).
//   CErm       Cheapest pair whose empirical misalignment is <= alpha. No
//              statistical guarantee.
//
// An empty certified set falls back to (0, 1), which routes every query to
// the human expert.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cascal/cascade.hpp"
#include "cascal/risk.hpp"

namespace cascal {

enum class Method { kMhtErm, kMhtErmB, kCErm, kEdgeOnly, kCloudOnly, kHumanOnly };

std::string_view MethodName(Method method);
std::optional<Method> ParseMethod(std::string_view name);
bool IsFixedMethod(Method method);

struct CalibrationOutcome {
  Method method = Method::kHumanOnly;
  Policy policy = Policy::FromThresholds(kHumanFallback);
  // Pairs that passed the method's test, in chain order (epsilon ascending,
  // lambda descending). Holds only (0, 1) when the fallback was applied and
  // is empty for fixed policies.
  std::vector<Thresholds> certified_set;
  bool fallback_used = false;
  // MhtErm only: one-based q_m per chain, the lambda index at which the
  // chain stopped. Pairs with q > q_m are certified; 0 means the whole chain.
  std::vector<int> stop_indices;
  std::optional<RiskSurface> surface;
  double alpha = 0.0;
  double delta = 0.0;
  // Empirical risks of the selected policy on the calibration data; unset
  // for fixed policies built without data.
  std::optional<double> calibration_misalignment;
  std::optional<double> calibration_cost;

  // The selected threshold pair, or nullopt for a fixed-tier policy.
  std::optional<Thresholds> selected() const {
    if (policy.is_fixed()) return std::nullopt;
    return policy.thresholds();
  }
};

// Ranking used when choosing among certified pairs: lower cost, then lower
// misalignment, then larger lambda, then smaller epsilon.
struct ScoredCandidate {
  Thresholds thresholds;
  double cost = 0.0;
  double misalignment = 0.0;
};
bool RanksBefore(const ScoredCandidate& a, const ScoredCandidate& b);

// Throws ValidationError on an empty candidate list or empty dataset.
Thresholds SelectMinCost(std::span<const Thresholds> candidates,
                         std::span<const CascadeRecord> dataset, const CostModel& costs);

CalibrationOutcome MhtErm(std::span<const CascadeRecord> dataset, const ThresholdGrid& grid,
                          double alpha, double delta, const CostModel& costs);
CalibrationOutcome MhtErmBonferroni(std::span<const CascadeRecord> dataset,
                                    const ThresholdGrid& grid, double alpha, double delta,
                                    const CostModel& costs);
CalibrationOutcome CErm(std::span<const CascadeRecord> dataset, const ThresholdGrid& grid,
                        double alpha, const CostModel& costs);

// Single-tier baseline that ignores the scores.
CalibrationOutcome FixedPolicy(Tier tier);
Method FixedMethodFor(Tier tier);

// Dispatches on `method`. Fixed methods ignore the grid and alpha/delta, but
// still report calibration risks on the given data.
CalibrationOutcome Calibrate(Method method, std::span<const CascadeRecord> dataset,
                             const ThresholdGrid& grid, double alpha, double delta,
                             const CostModel& costs);

}  // namespace cascal

#endif  // CASCAL_CALIBRATION_HPP_
