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

#include "cascal/harness.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "cascal/stats.hpp"
#include "parse_util.hpp"
#include "rng.hpp"

namespace cascal {
namespace {

TrialResult BaseResult(const CalibrationOutcome& outcome, std::size_t n, std::uint64_t seed) {
  TrialResult r;
  r.method = outcome.method;
  r.policy = outcome.policy;
  r.fallback_used = outcome.fallback_used;
  r.certified_count = outcome.certified_set.size();
  r.calibration_misalignment = outcome.calibration_misalignment.value_or(0.0);
  r.calibration_cost = outcome.calibration_cost.value_or(0.0);
  r.n = n;
  r.seed = seed;
  return r;
}

// Runs body(i) for i in [0, count) on up to `workers` threads.
template <typename Body>
void ParallelFor(std::size_t count, int workers, Body body) {
  const std::size_t threads =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace

void ValidateConfig(const ExperimentConfig& config) {
  if (config.methods.empty()) throw ValidationError("at least one method is required");
  if (config.n == 0) throw ValidationError("calibration size must be at least 1");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0, 1)");
  }
  if (!(config.delta > 0.0 && config.delta < 1.0)) {
    throw ValidationError("delta must lie in (0, 1)");
  }
  ThresholdGrid grid(config.m_count, config.q_count);
  ValidateCosts(config.costs);
}

std::string_view EvaluationName(Evaluation evaluation) {
  return evaluation == Evaluation::kOracle ? "oracle" : "test-set";
}

std::vector<TrialResult> RunTrial(const DiscreteScoreModel& model, const ExperimentConfig& config,
                                  std::uint64_t seed) {
  ValidateConfig(config);
  const std::vector<CascadeRecord> data = SampleDataset(model, config.n, seed);
  const ThresholdGrid grid(config.m_count, config.q_count);
  std::vector<TrialResult> results;
  results.reserve(config.methods.size());
  for (Method method : config.methods) {
    const CalibrationOutcome outcome =
        Calibrate(method, data, grid, config.alpha, config.delta, config.costs);
    TrialResult r = BaseResult(outcome, config.n, seed);
    r.misalignment = TrueMisalignment(model, outcome.policy);
    r.cost = TrueCost(model, outcome.policy, config.costs);
    r.violated = r.misalignment > config.alpha;
    results.push_back(r);
  }
  return results;
}

std::vector<TrialResult> RunTrialOnData(std::span<const CascadeRecord> dataset,
                                        const ExperimentConfig& config, std::uint64_t seed) {
  ValidateConfig(config);
  if (config.test_size == 0) throw ValidationError("test size must be at least 1");
  if (config.n + config.test_size > dataset.size()) {
    std::ostringstream msg;
    msg << "dataset has " << dataset.size() << " records, calibration + test needs "
        << config.n + config.test_size;
    throw ValidationError(msg.str());
  }
  std::vector<CascadeRecord> shuffled(dataset.begin(), dataset.end());
  std::mt19937_64 rng = internal::SeededEngine(seed);
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(internal::Uniform(rng) * static_cast<double>(i));
    std::swap(shuffled[i - 1], shuffled[j]);
  }
  const std::span<const CascadeRecord> calibration(shuffled.data(), config.n);
  const std::span<const CascadeRecord> test(shuffled.data() + config.n, config.test_size);

  const ThresholdGrid grid(config.m_count, config.q_count);
  std::vector<TrialResult> results;
  for (Method method : config.methods) {
    const CalibrationOutcome outcome =
        Calibrate(method, calibration, grid, config.alpha, config.delta, config.costs);
    TrialResult r = BaseResult(outcome, config.n, seed);
    const TierCounts counts = Tally(test, outcome.policy);
    r.misalignment = MeanMisalignment(counts);
    r.cost = MeanCost(counts, config.costs);
    r.violated = r.misalignment > config.alpha;
    results.push_back(r);
  }
  return results;
}

const MethodSummary& McSummary::For(Method method) const {
  for (const auto& m : methods) {
    if (m.method == method) return m;
  }
  throw ValidationError("summary has no entry for method " + std::string(MethodName(method)));
}

McSummary Summarize(const std::vector<std::vector<TrialResult>>& per_trial,
                    const ExperimentConfig& config, Evaluation evaluation,
                    std::uint64_t base_seed) {
  if (per_trial.empty()) throw ValidationError("no trials to summarize");
  McSummary summary;
  summary.config = config;
  summary.evaluation = evaluation;
  summary.trials = per_trial.size();
  summary.base_seed = base_seed;

  for (std::size_t k = 0; k < config.methods.size(); ++k) {
    std::vector<double> misalignment, cost, calibration_cost;
    MethodSummary s;
    s.method = config.methods[k];
    std::size_t fallbacks = 0;
    for (const auto& trial : per_trial) {
      const TrialResult& r = trial.at(k);
      misalignment.push_back(r.misalignment);
      cost.push_back(r.cost);
      calibration_cost.push_back(r.calibration_cost);
      if (r.violated) ++s.violations;
      if (r.fallback_used) ++fallbacks;
    }
    const double trials = static_cast<double>(per_trial.size());
    s.trials = per_trial.size();
    s.violation_rate = static_cast<double>(s.violations) / trials;
    s.fallback_rate = static_cast<double>(fallbacks) / trials;
    s.mean_misalignment = Mean(misalignment);
    s.std_misalignment = SampleStd(misalignment);
    s.mean_cost = Mean(cost);
    s.std_cost = SampleStd(cost);
    s.quantile_misalignment = Quantile(misalignment, 1.0 - config.delta);
    s.iqr_max_misalignment = IqrMax(misalignment);
    s.iqr_max_cost = IqrMax(cost);
    s.mean_calibration_cost = Mean(calibration_cost);
    summary.methods.push_back(s);
  }
  return summary;
}

McSummary RunMonteCarlo(const DiscreteScoreModel& model, const ExperimentConfig& config,
                        std::size_t trials, std::uint64_t base_seed, int workers) {
  if (trials == 0) throw ValidationError("trial count must be at least 1");
  ValidateConfig(config);
  ValidateModel(model);
  std::vector<std::vector<TrialResult>> per_trial(trials);
  ParallelFor(trials, workers, [&](std::size_t i) {
    per_trial[i] = RunTrial(model, config, base_seed + i);
  });
  return Summarize(per_trial, config, Evaluation::kOracle, base_seed);
}

McSummary RunMonteCarloOnData(std::span<const CascadeRecord> dataset,
                              const ExperimentConfig& config, std::size_t trials,
                              std::uint64_t base_seed, int workers) {
  if (trials == 0) throw ValidationError("trial count must be at least 1");
  ValidateConfig(config);
  std::vector<std::vector<TrialResult>> per_trial(trials);
  ParallelFor(trials, workers, [&](std::size_t i) {
    per_trial[i] = RunTrialOnData(dataset, config, base_seed + i);
  });
  return Summarize(per_trial, config, Evaluation::kTestSet, base_seed);
}

std::string_view SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kCalibrationSize:
      return "n";
    case SweepAxis::kAlpha:
      return "alpha";
    case SweepAxis::kGrid:
      return "grid";
    case SweepAxis::kCostProfile:
      return "costs";
  }
  return "unknown";
}

std::optional<SweepAxis> ParseSweepAxis(std::string_view name) {
  if (name == "n" || name == "calibration_size") return SweepAxis::kCalibrationSize;
  if (name == "alpha") return SweepAxis::kAlpha;
  if (name == "grid") return SweepAxis::kGrid;
  if (name == "costs" || name == "cost_profile") return SweepAxis::kCostProfile;
  return std::nullopt;
}

std::pair<int, int> ParseGridSpec(std::string_view text) {
  const auto parts = internal::Split(internal::Trim(text), 'x');
  if (parts.size() != 2) {
    throw ValidationError("grid must look like MxQ, got \"" + std::string(text) + "\"");
  }
  const int m = internal::ParseInteger<int>(parts[0], "grid M");
  const int q = internal::ParseInteger<int>(parts[1], "grid Q");
  ThresholdGrid check(m, q);
  return {m, q};
}

CostModel ParseCostSpec(std::string_view text) {
  const char sep = text.find(':') != std::string_view::npos ? ':' : ',';
  const auto parts = internal::Split(text, sep);
  if (parts.size() != 3) {
    throw ValidationError("costs must list edge, cloud and human costs, got \"" +
                          std::string(text) + "\"");
  }
  CostModel costs{internal::ParseDouble(parts[0], "edge cost"),
                  internal::ParseDouble(parts[1], "cloud cost"),
                  internal::ParseDouble(parts[2], "human cost"), 1};
  ValidateCosts(costs);
  return costs;
}

std::vector<SweepPoint> MakeSweepPoints(SweepAxis axis, std::span<const std::string> values,
                                        const DiscreteScoreModel& model,
                                        const ExperimentConfig& config) {
  if (values.empty()) throw ValidationError("sweep needs at least one value");
  std::vector<SweepPoint> points;
  for (const std::string& raw : values) {
    const std::string_view value = internal::Trim(raw);
    SweepPoint point{std::string(value), model, config};
    switch (axis) {
      case SweepAxis::kCalibrationSize:
        point.config.n = internal::ParseInteger<std::size_t>(value, "calibration size");
        break;
      case SweepAxis::kAlpha:
        point.config.alpha = internal::ParseDouble(value, "alpha");
        break;
      case SweepAxis::kGrid: {
        const auto [m, q] = ParseGridSpec(value);
        point.config.m_count = m;
        point.config.q_count = q;
        break;
      }
      case SweepAxis::kCostProfile: {
        const std::size_t at = value.find('@');
        const CostModel costs = ParseCostSpec(value.substr(0, at));
        point.config.costs.l_edge = costs.l_edge;
        point.config.costs.l_cloud = costs.l_cloud;
        point.config.costs.l_human = costs.l_human;
        if (at != std::string_view::npos) {
          point.model = WithMeanCloudAccuracy(
              model, internal::ParseDouble(value.substr(at + 1), "cloud accuracy"));
        }
        break;
      }
    }
    ValidateConfig(point.config);
    points.push_back(std::move(point));
  }
  return points;
}

std::vector<SweepRow> RunSweep(std::span<const SweepPoint> points, std::size_t trials,
                               std::uint64_t base_seed, int workers) {
  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (const SweepPoint& point : points) {
    rows.push_back({point.label, RunMonteCarlo(point.model, point.config, trials, base_seed,
                                               workers)});
  }
  return rows;
}

}  // namespace cascal
