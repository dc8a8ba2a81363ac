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

#include "cascal/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cascal {
namespace {

void RequireNonEmpty(std::span<const CascadeRecord> dataset) {
  if (dataset.empty()) throw ValidationError("dataset must contain at least one record");
}

struct Candidate {
  double activation;  // routed to `tier` iff lambda < activation
  Tier tier;
  int misaligned;
};

// Tier counts for every lambda of one epsilon row.
void SweepRow(std::span<const CascadeRecord> dataset, const ThresholdGrid& grid, int m,
              const CostModel& costs, RiskSurface& surface) {
  const double epsilon = grid.epsilon(m);
  std::vector<Candidate> candidates;
  candidates.reserve(dataset.size());
  for (const auto& r : dataset) {
    if (r.u_edge < epsilon) {
      candidates.push_back({r.c_edge, Tier::kEdge, MisalignmentForTier(r, Tier::kEdge)});
    } else if (r.u_cloud < epsilon) {
      candidates.push_back({r.c_cloud, Tier::kCloud, MisalignmentForTier(r, Tier::kCloud)});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.activation < b.activation; });

  // Suffix sums: records at sorted index >= k.
  const std::size_t c = candidates.size();
  std::vector<std::size_t> edge(c + 1, 0), cloud(c + 1, 0), wrong(c + 1, 0);
  for (std::size_t k = c; k-- > 0;) {
    edge[k] = edge[k + 1] + (candidates[k].tier == Tier::kEdge ? 1 : 0);
    cloud[k] = cloud[k + 1] + (candidates[k].tier == Tier::kCloud ? 1 : 0);
    wrong[k] = wrong[k + 1] + static_cast<std::size_t>(candidates[k].misaligned);
  }

  for (int q = 0; q < grid.q_count(); ++q) {
    const double lambda = grid.lambda(q);
    const auto first_active = std::upper_bound(
        candidates.begin(), candidates.end(), lambda,
        [](double value, const Candidate& cand) { return value < cand.activation; });
    const auto k = static_cast<std::size_t>(first_active - candidates.begin());
    TierCounts counts;
    counts.edge = edge[k];
    counts.cloud = cloud[k];
    counts.human = dataset.size() - edge[k] - cloud[k];
    counts.misaligned = wrong[k];
    surface.misalignment(m, q) = MeanMisalignment(counts);
    surface.cost(m, q) = MeanCost(counts, costs);
  }
}

}  // namespace

void TierCounts::Add(Tier tier, int misalignment) {
  switch (tier) {
    case Tier::kEdge:
      ++edge;
      break;
    case Tier::kCloud:
      ++cloud;
      break;
    case Tier::kHuman:
      ++human;
      break;
  }
  misaligned += static_cast<std::size_t>(misalignment);
}

TierCounts Tally(std::span<const CascadeRecord> dataset, const Policy& policy) {
  TierCounts counts;
  for (const auto& record : dataset) {
    const Tier tier = policy.Route(record);
    counts.Add(tier, MisalignmentForTier(record, tier));
  }
  return counts;
}

double MeanMisalignment(const TierCounts& counts) {
  return static_cast<double>(counts.misaligned) / static_cast<double>(counts.total());
}

double MeanCost(const TierCounts& counts, const CostModel& costs) {
  const double total = static_cast<double>(counts.edge) * costs.TierCost(Tier::kEdge) +
                       static_cast<double>(counts.cloud) * costs.TierCost(Tier::kCloud) +
                       static_cast<double>(counts.human) * costs.TierCost(Tier::kHuman);
  return total / static_cast<double>(counts.total());
}

double EmpiricalMisalignment(std::span<const CascadeRecord> dataset, const Policy& policy) {
  RequireNonEmpty(dataset);
  return MeanMisalignment(Tally(dataset, policy));
}

double EmpiricalMisalignment(std::span<const CascadeRecord> dataset, const Thresholds& thresholds) {
  return EmpiricalMisalignment(dataset, Policy::FromThresholds(thresholds));
}

double EmpiricalCost(std::span<const CascadeRecord> dataset, const Policy& policy,
                     const CostModel& costs) {
  RequireNonEmpty(dataset);
  return MeanCost(Tally(dataset, policy), costs);
}

double EmpiricalCost(std::span<const CascadeRecord> dataset, const Thresholds& thresholds,
                     const CostModel& costs) {
  return EmpiricalCost(dataset, Policy::FromThresholds(thresholds), costs);
}

double HoeffdingPValue(double r_hat, double alpha, std::size_t n) {
  const double margin = std::max(0.0, alpha - r_hat);
  const double p = std::exp(-2.0 * static_cast<double>(n) * margin * margin);
  // exp underflows to 0 for very large n * margin^2; p-values stay positive.
  return std::max(p, std::numeric_limits<double>::denorm_min());
}

RiskSurface BuildRiskSurface(std::span<const CascadeRecord> dataset, const ThresholdGrid& grid,
                             const CostModel& costs, double alpha, SurfaceAlgorithm algorithm) {
  RequireNonEmpty(dataset);
  RiskSurface surface;
  surface.grid = grid;
  surface.n = dataset.size();
  surface.misalignment = Matrix(grid.m_count(), grid.q_count());
  surface.cost = Matrix(grid.m_count(), grid.q_count());

  for (int m = 0; m < grid.m_count(); ++m) {
    if (algorithm == SurfaceAlgorithm::kSweep) {
      SweepRow(dataset, grid, m, costs, surface);
      continue;
    }
    for (int q = 0; q < grid.q_count(); ++q) {
      const TierCounts counts = Tally(dataset, Policy::FromThresholds(grid.at(m, q)));
      surface.misalignment(m, q) = MeanMisalignment(counts);
      surface.cost(m, q) = MeanCost(counts, costs);
    }
  }
  RebuildPValues(surface, alpha);
  return surface;
}

void RebuildPValues(RiskSurface& surface, double alpha) {
  const ThresholdGrid& grid = surface.grid;
  surface.alpha = alpha;
  surface.p_value = Matrix(grid.m_count(), grid.q_count());
  for (int m = 0; m < grid.m_count(); ++m) {
    for (int q = 0; q < grid.q_count(); ++q) {
      surface.p_value(m, q) = HoeffdingPValue(surface.misalignment(m, q), alpha, surface.n);
    }
  }
}

}  // namespace cascal
