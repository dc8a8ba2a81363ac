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

#include "cascal/calibration.hpp"

#include <sstream>

namespace cascal {
namespace {

void CheckLevel(double value, const char* name) {
  if (!(value > 0.0 && value < 1.0)) {
    std::ostringstream msg;
    msg << name << " = " << value << " must lie in (0, 1)";
    throw ValidationError(msg.str());
  }
}

struct GridIndex {
  int m;
  int q;
};

CalibrationOutcome Finish(Method method, std::span<const CascadeRecord> dataset,
                          const CostModel& costs, RiskSurface surface,
                          const std::vector<GridIndex>& certified, double delta) {
  CalibrationOutcome out;
  out.method = method;
  out.alpha = surface.alpha;
  out.delta = delta;
  const ThresholdGrid& grid = surface.grid;

  if (certified.empty()) {
    out.fallback_used = true;
    out.certified_set = {kHumanFallback};
    out.policy = Policy::FromThresholds(kHumanFallback);
    const TierCounts counts = Tally(dataset, out.policy);
    out.calibration_misalignment = MeanMisalignment(counts);
    out.calibration_cost = MeanCost(counts, costs);
  } else {
    out.certified_set.reserve(certified.size());
    std::optional<ScoredCandidate> best;
    for (const GridIndex& idx : certified) {
      const ScoredCandidate cand{grid.at(idx.m, idx.q), surface.cost(idx.m, idx.q),
                                 surface.misalignment(idx.m, idx.q)};
      out.certified_set.push_back(cand.thresholds);
      if (!best || RanksBefore(cand, *best)) best = cand;
    }
    out.policy = Policy::FromThresholds(best->thresholds);
    out.calibration_misalignment = best->misalignment;
    out.calibration_cost = best->cost;
  }
  out.surface = std::move(surface);
  return out;
}

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kMhtErm:
      return "mht-erm";
    case Method::kMhtErmB:
      return "mht-erm-b";
    case Method::kCErm:
      return "c-erm";
    case Method::kEdgeOnly:
      return "edge-only";
    case Method::kCloudOnly:
      return "cloud-only";
    case Method::kHumanOnly:
      return "human-only";
  }
  return "unknown";
}

std::optional<Method> ParseMethod(std::string_view name) {
  for (Method m : {Method::kMhtErm, Method::kMhtErmB, Method::kCErm, Method::kEdgeOnly,
                   Method::kCloudOnly, Method::kHumanOnly}) {
    if (MethodName(m) == name) return m;
  }
  return std::nullopt;
}

bool IsFixedMethod(Method method) {
  return method == Method::kEdgeOnly || method == Method::kCloudOnly ||
         method == Method::kHumanOnly;
}

bool RanksBefore(const ScoredCandidate& a, const ScoredCandidate& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.misalignment != b.misalignment) return a.misalignment < b.misalignment;
  if (a.thresholds.lambda != b.thresholds.lambda) {
    return a.thresholds.lambda > b.thresholds.lambda;
  }
  return a.thresholds.epsilon < b.thresholds.epsilon;
}

Thresholds SelectMinCost(std::span<const Thresholds> candidates,
                         std::span<const CascadeRecord> dataset, const CostModel& costs) {
  if (candidates.empty()) throw ValidationError("candidate list is empty");
  if (dataset.empty()) throw ValidationError("dataset must contain at least one record");
  std::optional<ScoredCandidate> best;
  for (const Thresholds& t : candidates) {
    const TierCounts counts = Tally(dataset, Policy::FromThresholds(t));
    const ScoredCandidate cand{t, MeanCost(counts, costs), MeanMisalignment(counts)};
    if (!best || RanksBefore(cand, *best)) best = cand;
  }
  return best->thresholds;
}

CalibrationOutcome MhtErm(std::span<const CascadeRecord> dataset, const ThresholdGrid& grid,
                          double alpha, double delta, const CostModel& costs) {
  CheckLevel(alpha, "alpha");
  CheckLevel(delta, "delta");
  RiskSurface surface = BuildRiskSurface(dataset, grid, costs, alpha);
  const double level = delta / grid.m_count();

  std::vector<GridIndex> certified;
  std::vector<int> stops(static_cast<std::size_t>(grid.m_count()), 0);
  for (int m = 0; m < grid.m_count(); ++m) {
    for (int q = grid.q_count() - 1; q >= 0; --q) {
      if (surface.p_value(m, q) <= level) {
        certified.push_back({m, q});
      } else {
        stops[static_cast<std::size_t>(m)] = q + 1;
        break;
      }
    }
  }
  CalibrationOutcome out =
      Finish(Method::kMhtErm, dataset, costs, std::move(surface), certified, delta);
  out.stop_indices = std::move(stops);
  return out;
}

CalibrationOutcome MhtErmBonferroni(std::span<const CascadeRecord> dataset,
                                    const ThresholdGrid& grid, double alpha, double delta,
                                    const CostModel& costs) {
  CheckLevel(alpha, "alpha");
  CheckLevel(delta, "delta");
  RiskSurface surface = BuildRiskSurface(dataset, grid, costs, alpha);
  const double level = delta / static_cast<double>(grid.size());

  std::vector<GridIndex> certified;
  for (int m = 0; m < grid.m_count(); ++m) {
    for (int q = grid.q_count() - 1; q >= 0; --q) {
      if (surface.p_value(m, q) <= level) certified.push_back({m, q});
    }
  }
  return Finish(Method::kMhtErmB, dataset, costs, std::move(surface), certified, delta);
}

CalibrationOutcome CErm(std::span<const CascadeRecord> dataset, const ThresholdGrid& grid,
                        double alpha, const CostModel& costs) {
  CheckLevel(alpha, "alpha");
  RiskSurface surface = BuildRiskSurface(dataset, grid, costs, alpha);

  std::vector<GridIndex> feasible;
  for (int m = 0; m < grid.m_count(); ++m) {
    for (int q = grid.q_count() - 1; q >= 0; --q) {
      if (surface.misalignment(m, q) <= alpha) feasible.push_back({m, q});
    }
  }
  return Finish(Method::kCErm, dataset, costs, std::move(surface), feasible, 0.0);
}

Method FixedMethodFor(Tier tier) {
  switch (tier) {
    case Tier::kEdge:
      return Method::kEdgeOnly;
    case Tier::kCloud:
      return Method::kCloudOnly;
    case Tier::kHuman:
      return Method::kHumanOnly;
  }
  return Method::kHumanOnly;
}

CalibrationOutcome FixedPolicy(Tier tier) {
  CalibrationOutcome out;
  out.method = FixedMethodFor(tier);
  out.policy = Policy::Fixed(tier);
  return out;
}

CalibrationOutcome Calibrate(Method method, std::span<const CascadeRecord> dataset,
                             const ThresholdGrid& grid, double alpha, double delta,
                             const CostModel& costs) {
  switch (method) {
    case Method::kMhtErm:
      return MhtErm(dataset, grid, alpha, delta, costs);
    case Method::kMhtErmB:
      return MhtErmBonferroni(dataset, grid, alpha, delta, costs);
    case Method::kCErm:
      return CErm(dataset, grid, alpha, costs);
    case Method::kEdgeOnly:
    case Method::kCloudOnly:
    case Method::kHumanOnly:
      break;
  }
  const Tier tier = method == Method::kEdgeOnly    ? Tier::kEdge
                    : method == Method::kCloudOnly ? Tier::kCloud
                                                   : Tier::kHuman;
  CalibrationOutcome out = FixedPolicy(tier);
  out.alpha = alpha;
  out.delta = delta;
  if (!dataset.empty()) {
    const TierCounts counts = Tally(dataset, out.policy);
    out.calibration_misalignment = MeanMisalignment(counts);
    out.calibration_cost = MeanCost(counts, costs);
  }
  return out;
}

}  // namespace cascal
