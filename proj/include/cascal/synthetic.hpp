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

#ifndef CASCAL_SYNTHETIC_HPP_
#define CASCAL_SYNTHETIC_HPP_

// Finite-support generative model of cascade records.
//
// Every record belongs to one of T types. A type fixes the four scores, so
// routing is deterministic per type and the true risks of any policy are
// finite weighted sums. Correctness of the edge and cloud answers is drawn
// independently from Bernoulli(a_edge) and Bernoulli(a_cloud).
//
// Sampling uses std::mt19937_64 seeded with splitmix64(seed). Each record
// consumes exactly three uniforms (type, edge, cloud) in that order, so two
// models that differ only in accuracies produce coupled datasets for the
// same seed.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascal/calibration.hpp"
#include "cascal/cascade.hpp"

namespace cascal {

inline constexpr std::string_view kGeneratorName = "mt19937_64/splitmix64";

struct ScoreType {
  double weight = 0.0;
  double u_edge = 0.0;
  double c_edge = 0.0;
  double u_cloud = 0.0;
  double c_cloud = 0.0;
  double a_edge = 0.0;
  double a_cloud = 0.0;

  friend bool operator==(const ScoreType&, const ScoreType&) = default;
};

struct DiscreteScoreModel {
  std::vector<ScoreType> types;

  friend bool operator==(const DiscreteScoreModel&, const DiscreteScoreModel&) = default;
};

// Weights strictly positive and summing to 1 within 1e-12; scores and
// accuracies in [0, 1]. Throws ValidationError naming the offending type.
void ValidateModel(const DiscreteScoreModel& model);

std::vector<CascadeRecord> SampleDataset(const DiscreteScoreModel& model, std::size_t n,
                                         std::uint64_t seed);

double TrueMisalignment(const DiscreteScoreModel& model, const Policy& policy);
double TrueMisalignment(const DiscreteScoreModel& model, const Thresholds& thresholds);
double TrueCost(const DiscreteScoreModel& model, const Policy& policy, const CostModel& costs);
double TrueCost(const DiscreteScoreModel& model, const Thresholds& thresholds,
                const CostModel& costs);

// 20 types ordered from easy (low uncertainty, high confidence, accurate) to
// hard (high uncertainty, low accuracy).
DiscreteScoreModel DefaultModel();

// A model whose cheapest empirically feasible policies sit just around
// misalignment 0.3, so unprotected grid search overfits at small n.
DiscreteScoreModel BoundaryModel();

// Weighted mean of a_cloud.
double MeanCloudAccuracy(const DiscreteScoreModel& model);

// Shifts every a_cloud by a common offset so that the weighted mean equals
// `target`. Throws if the shift would push any accuracy outside [0, 1].
DiscreteScoreModel WithMeanCloudAccuracy(const DiscreteScoreModel& model, double target);

// JSON model files: {"types": [{"weight", "u_edge", "c_edge", "u_cloud",
// "c_cloud", "a_edge", "a_cloud"}, ...]}. Validated on load.
DiscreteScoreModel ParseModelJson(std::string_view text);
std::string ModelToJson(const DiscreteScoreModel& model);
DiscreteScoreModel LoadModel(const std::filesystem::path& path);
void SaveModel(const DiscreteScoreModel& model, const std::filesystem::path& path);

// Literal loop-for-loop MHT-ERM with every empirical risk recomputed from
// the records. Only meant for small grids; used to cross-check MhtErm.
CalibrationOutcome ReferenceMhtErm(std::span<const CascadeRecord> dataset, int m_count,
                                   int q_count, double alpha, double delta,
                                   const CostModel& costs);

}  // namespace cascal

#endif  // CASCAL_SYNTHETIC_HPP_
