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

#ifndef CASCAL_RISK_HPP_
#define CASCAL_RISK_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "cascal/cascade.hpp"

namespace cascal {

// How many records land on each tier under one policy, and how many of the
// routed answers disagree with the expert.
struct TierCounts {
  std::size_t edge = 0;
  std::size_t cloud = 0;
  std::size_t human = 0;
  std::size_t misaligned = 0;

  std::size_t total() const { return edge + cloud + human; }
  void Add(Tier tier, int misalignment);
};

TierCounts Tally(std::span<const CascadeRecord> dataset, const Policy& policy);

// Means computed from tallies. Every empirical risk in the library goes
// through these two functions, which makes the sweep-based surface and the
// per-pair evaluation agree to the last bit.
double MeanMisalignment(const TierCounts& counts);
double MeanCost(const TierCounts& counts, const CostModel& costs);

// Throw ValidationError on an empty dataset.
double EmpiricalMisalignment(std::span<const CascadeRecord> dataset, const Thresholds& thresholds);
double EmpiricalMisalignment(std::span<const CascadeRecord> dataset, const Policy& policy);
double EmpiricalCost(std::span<const CascadeRecord> dataset, const Thresholds& thresholds,
                     const CostModel& costs);
double EmpiricalCost(std::span<const CascadeRecord> dataset, const Policy& policy,
                     const CostModel& costs);

// exp(-2 n ((alpha - r_hat)_+)^2). Equals 1 whenever r_hat >= alpha.
double HoeffdingPValue(double r_hat, double alpha, std::size_t n);

// Dense row-major matrix indexed by (m, q).
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  std::span<const double> row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Empirical misalignment, cost and Hoeffding p-value for every grid pair.
// misalignment and cost do not depend on alpha; see RebuildPValues.
struct RiskSurface {
  ThresholdGrid grid{2, 2};
  Matrix misalignment;
  Matrix cost;
  Matrix p_value;
  std::size_t n = 0;
  double alpha = 0.0;
};

enum class SurfaceAlgorithm {
  // One sorted sweep over confidence per epsilon row.
  kSweep,
  // Independent tally per grid pair.
  kNaive,
};

RiskSurface BuildRiskSurface(std::span<const CascadeRecord> dataset, const ThresholdGrid& grid,
                             const CostModel& costs, double alpha,
                             SurfaceAlgorithm algorithm = SurfaceAlgorithm::kSweep);

// Recomputes only the p-value matrix for a new alpha.
void RebuildPValues(RiskSurface& surface, double alpha);

}  // namespace cascal

#endif  // CASCAL_RISK_HPP_
