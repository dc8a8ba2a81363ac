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

#ifndef CASCAL_CASCADE_HPP_
#define CASCAL_CASCADE_HPP_

// Domain types and routing semantics for an edge -> cloud -> human cascade.
//
// A query is answered at the edge when the edge model passes both the
// knowledge test (u_edge < epsilon) and the confidence test
// (c_edge > lambda). A query that fails the edge knowledge test escalates to
// the cloud, which answers under the same two tests. Every other query is
// deferred to the human expert, including the case where the edge passes the
// knowledge test but fails the confidence test.

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cascal/errors.hpp"

namespace cascal {

// One calibration query: the four scores and whether each model answered
// correctly.
struct CascadeRecord {
  double u_edge = 0.0;
  double c_edge = 0.0;
  double u_cloud = 0.0;
  double c_cloud = 0.0;
  bool edge_correct = false;
  bool cloud_correct = false;

  friend bool operator==(const CascadeRecord&, const CascadeRecord&) = default;
};

// Throws ValidationError unless every score lies in [0, 1].
void ValidateRecord(const CascadeRecord& record);

// Threshold pair (epsilon, lambda) used by the routing rule.
struct Thresholds {
  double epsilon = 0.0;
  double lambda = 1.0;

  friend auto operator<=>(const Thresholds&, const Thresholds&) = default;
};

// Routes everything to the human expert.
inline constexpr Thresholds kHumanFallback{0.0, 1.0};

enum class Tier { kEdge, kCloud, kHuman };

std::string_view TierName(Tier tier);
std::optional<Tier> ParseTier(std::string_view name);

struct CostModel {
  double l_edge = 0.0;
  double l_cloud = 0.0;
  double l_human = 0.0;
  // Applies to the edge and cloud tiers only: K model calls per query in
  // prompt-ensemble mode, 1 otherwise.
  int call_multiplier = 1;

  double TierCost(Tier tier) const;

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

// Throws on negative costs or a non-positive multiplier. Returns a warning
// message (empty if none) when l_human >= l_cloud >= l_edge does not hold.
std::string ValidateCosts(const CostModel& costs);

// Uniform M x Q lattice: epsilon_m = m / (M - 1), lambda_q = q / (Q - 1),
// with zero-based m, q.
class ThresholdGrid {
 public:
  ThresholdGrid(int m_count, int q_count);

  int m_count() const { return m_count_; }
  int q_count() const { return q_count_; }
  std::size_t size() const {
    return static_cast<std::size_t>(m_count_) * static_cast<std::size_t>(q_count_);
  }

  double epsilon(int m) const;
  double lambda(int q) const;
  Thresholds at(int m, int q) const { return {epsilon(m), lambda(q)}; }

  // Every pair, row-major in (m, q).
  std::vector<Thresholds> pairs() const;

  friend bool operator==(const ThresholdGrid&, const ThresholdGrid&) = default;

 private:
  int m_count_;
  int q_count_;
};

ThresholdGrid MakeGrid(int m_count, int q_count);

Tier Route(const CascadeRecord& record, const Thresholds& thresholds);

// 1 when the cascade output disagrees with the expert, 0 otherwise. The
// human branch returns the expert answer and is never misaligned.
int MisalignmentLoss(const CascadeRecord& record, const Thresholds& thresholds);

double CostLoss(const CascadeRecord& record, const Thresholds& thresholds,
                const CostModel& costs);

int MisalignmentForTier(const CascadeRecord& record, Tier tier);

// A deployable routing policy: either a threshold pair or a fixed tier that
// bypasses the thresholds (single-tier baselines).
class Policy {
 public:
  static Policy FromThresholds(const Thresholds& thresholds) {
    return Policy(thresholds, std::nullopt);
  }
  static Policy Fixed(Tier tier) { return Policy(kHumanFallback, tier); }

  bool is_fixed() const { return fixed_.has_value(); }
  std::optional<Tier> fixed_tier() const { return fixed_; }
  const Thresholds& thresholds() const { return thresholds_; }

  Tier Route(const CascadeRecord& record) const {
    return fixed_ ? *fixed_ : cascal::Route(record, thresholds_);
  }

  friend bool operator==(const Policy&, const Policy&) = default;

 private:
  Policy(const Thresholds& thresholds, std::optional<Tier> fixed)
      : thresholds_(thresholds), fixed_(fixed) {}

  Thresholds thresholds_;
  std::optional<Tier> fixed_;
};

}  // namespace cascal

#endif  // CASCAL_CASCADE_HPP_
