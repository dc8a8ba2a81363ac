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

#ifndef CASCAL_HARNESS_HPP_
#define CASCAL_HARNESS_HPP_

// Monte Carlo verification of calibration methods.
//
// Trial i of a batch samples its calibration set with seed base_seed + i,
// runs every configured method and scores the selected policies, either
// exactly against a DiscreteScoreModel or on a held-out test split of an
// ingested dataset. Trials run on any number of worker threads; results are
// stored by trial index and aggregated in that order, so summaries do not
// depend on the worker count.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascal/calibration.hpp"
#include "cascal/synthetic.hpp"

namespace cascal {

struct ExperimentConfig {
  std::vector<Method> methods = {Method::kMhtErm,   Method::kMhtErmB,   Method::kCErm,
                                 Method::kEdgeOnly, Method::kCloudOnly, Method::kHumanOnly};
  std::size_t n = 100;
  double alpha = 0.3;
  double delta = 0.05;
  int m_count = 5;
  int q_count = 100;
  CostModel costs{1.5, 7.0, 10.0, 1};
  // Held-out split size, data mode only.
  std::size_t test_size = 1000;
};

// Throws ValidationError on out-of-range settings.
void ValidateConfig(const ExperimentConfig& config);

enum class Evaluation { kOracle, kTestSet };
std::string_view EvaluationName(Evaluation evaluation);

struct TrialResult {
  Method method = Method::kHumanOnly;
  Policy policy = Policy::FromThresholds(kHumanFallback);
  bool fallback_used = false;
  std::size_t certified_count = 0;
  // Exact risks (oracle) or held-out estimates (test set).
  double misalignment = 0.0;
  double cost = 0.0;
  double calibration_misalignment = 0.0;
  double calibration_cost = 0.0;
  bool violated = false;  // misalignment > alpha
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

std::vector<TrialResult> RunTrial(const DiscreteScoreModel& model, const ExperimentConfig& config,
                                  std::uint64_t seed);

// Shuffles `dataset` with `seed`, calibrates on the first config.n records
// and evaluates on the next config.test_size.
std::vector<TrialResult> RunTrialOnData(std::span<const CascadeRecord> dataset,
                                        const ExperimentConfig& config, std::uint64_t seed);

struct MethodSummary {
  Method method = Method::kHumanOnly;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double violation_rate = 0.0;
  double mean_misalignment = 0.0;
  double std_misalignment = 0.0;
  double mean_cost = 0.0;
  double std_cost = 0.0;
  // Nearest-rank 1 - delta quantile.
  double quantile_misalignment = 0.0;
  double iqr_max_misalignment = 0.0;
  double iqr_max_cost = 0.0;
  double fallback_rate = 0.0;
  double mean_calibration_cost = 0.0;
};

struct McSummary {
  ExperimentConfig config;
  Evaluation evaluation = Evaluation::kOracle;
  std::size_t trials = 0;
  std::uint64_t base_seed = 0;
  std::vector<MethodSummary> methods;

  const MethodSummary& For(Method method) const;
};

// `per_trial[i]` holds the results of trial i, one entry per method in
// config order.
McSummary Summarize(const std::vector<std::vector<TrialResult>>& per_trial,
                    const ExperimentConfig& config, Evaluation evaluation,
                    std::uint64_t base_seed);

McSummary RunMonteCarlo(const DiscreteScoreModel& model, const ExperimentConfig& config,
                        std::size_t trials, std::uint64_t base_seed, int workers = 1);
McSummary RunMonteCarloOnData(std::span<const CascadeRecord> dataset,
                              const ExperimentConfig& config, std::size_t trials,
                              std::uint64_t base_seed, int workers = 1);

enum class SweepAxis { kCalibrationSize, kAlpha, kGrid, kCostProfile };
std::string_view SweepAxisName(SweepAxis axis);
std::optional<SweepAxis> ParseSweepAxis(std::string_view name);

struct SweepPoint {
  std::string label;
  DiscreteScoreModel model;
  ExperimentConfig config;
};

// Builds one point per value. Value syntax by axis:
//   calibration size  "100"
//   alpha             "0.3"
//   grid              "5x100"
//   cost profile      "1.5:7:10", optionally "1.5:4:10@0.716" to also set
//                     the model's mean cloud accuracy
std::vector<SweepPoint> MakeSweepPoints(SweepAxis axis, std::span<const std::string> values,
                                        const DiscreteScoreModel& model,
                                        const ExperimentConfig& config);

struct SweepRow {
  std::string label;
  McSummary summary;
};

std::vector<SweepRow> RunSweep(std::span<const SweepPoint> points, std::size_t trials,
                               std::uint64_t base_seed, int workers = 1);

// "5x100" -> (5, 100). Throws ValidationError on malformed input.
std::pair<int, int> ParseGridSpec(std::string_view text);
// "1.5,7,10" (or ':'-separated) -> costs with call_multiplier 1.
CostModel ParseCostSpec(std::string_view text);

}  // namespace cascal

#endif  // CASCAL_HARNESS_HPP_
