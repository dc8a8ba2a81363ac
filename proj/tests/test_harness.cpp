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

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "cascal/harness.hpp"
#include "cascal/report.hpp"

using namespace cascal;

namespace {

ExperimentConfig SmallConfig() {
  ExperimentConfig config;
  config.n = 60;
  config.m_count = 4;
  config.q_count = 30;
  return config;
}

}  // namespace

TEST_CASE("a trial runs every method and scores it exactly") {
  const ExperimentConfig config = SmallConfig();
  const auto results = RunTrial(DefaultModel(), config, 5);
  REQUIRE(results.size() == config.methods.size());
  for (std::size_t k = 0; k < results.size(); ++k) {
    const TrialResult& r = results[k];
    CHECK(r.method == config.methods[k]);
    CHECK(r.seed == 5);
    CHECK(r.n == 60);
    CHECK(r.violated == (r.misalignment > config.alpha));
    if (r.method == Method::kHumanOnly) {
      CHECK_FALSE(r.violated);
      CHECK(r.cost == 10.0);
      CHECK(r.misalignment == 0.0);
    }
    if (r.method == Method::kEdgeOnly) CHECK(r.cost == 1.5);
  }
  CHECK(results[0].calibration_cost <= results[1].calibration_cost);
}

TEST_CASE("trials are deterministic per seed") {
  const auto a = RunTrial(DefaultModel(), SmallConfig(), 17);
  const auto b = RunTrial(DefaultModel(), SmallConfig(), 17);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].policy == b[k].policy);
    CHECK(a[k].misalignment == b[k].misalignment);
    CHECK(a[k].cost == b[k].cost);
  }
}

TEST_CASE("summary statistics follow their definitions") {
  ExperimentConfig config = SmallConfig();
  config.methods = {Method::kCErm};
  std::vector<std::vector<TrialResult>> per_trial;
  const double values[] = {0.1, 0.35, 0.2, 0.4};
  for (double v : values) {
    TrialResult r;
    r.method = Method::kCErm;
    r.misalignment = v;
    r.cost = 2 * v;
    r.violated = v > config.alpha;
    per_trial.push_back({r});
  }
  const McSummary s = Summarize(per_trial, config, Evaluation::kOracle, 3);
  const MethodSummary& m = s.For(Method::kCErm);
  CHECK(m.trials == 4);
  CHECK(m.violations == 2);
  CHECK(m.violation_rate == 0.5);
  CHECK(m.mean_misalignment == doctest::Approx(0.2625));
  // Sample std with n - 1: sqrt(0.056875 / 3).
  CHECK(m.std_misalignment == doctest::Approx(0.13768926368215256));
  CHECK(m.quantile_misalignment == 0.4);
  CHECK_THROWS_AS(s.For(Method::kMhtErm), ValidationError);
}

TEST_CASE("Monte Carlo summaries do not depend on the worker count") {
  const ExperimentConfig config = SmallConfig();
  const McSummary one = RunMonteCarlo(DefaultModel(), config, 24, 100, 1);
  const McSummary four = RunMonteCarlo(DefaultModel(), config, 24, 100, 4);
  CHECK(SummaryJson(one) == SummaryJson(four));
  CHECK(one.For(Method::kHumanOnly).violation_rate == 0.0);
  CHECK(one.For(Method::kHumanOnly).mean_cost == 10.0);
  CHECK(one.For(Method::kEdgeOnly).mean_cost == 1.5);
  CHECK(one.For(Method::kMhtErm).mean_calibration_cost <=
        one.For(Method::kMhtErmB).mean_calibration_cost);
  CHECK_THROWS_AS(RunMonteCarlo(DefaultModel(), config, 0, 1), ValidationError);
}

TEST_CASE("test-set mode splits an ingested dataset") {
  const auto data = SampleDataset(DefaultModel(), 400, 3);
  ExperimentConfig config = SmallConfig();
  config.test_size = 300;
  const auto results = RunTrialOnData(data, config, 9);
  REQUIRE(results.size() == config.methods.size());
  for (const auto& r : results) {
    CHECK(r.violated == (r.misalignment > config.alpha));
    // Test estimates are multiples of 1 / 300.
    CHECK(r.misalignment * 300 == doctest::Approx(std::round(r.misalignment * 300)));
  }
  const McSummary s = RunMonteCarloOnData(data, config, 5, 1);
  CHECK(s.evaluation == Evaluation::kTestSet);
  config.test_size = 1000;
  CHECK_THROWS_AS(RunTrialOnData(data, config, 9), ValidationError);
}

TEST_CASE("sweep points per axis") {
  const ExperimentConfig base = SmallConfig();
  const DiscreteScoreModel model = DefaultModel();
  const std::vector<std::string> ns{"10", "50"};
  auto points = MakeSweepPoints(SweepAxis::kCalibrationSize, ns, model, base);
  REQUIRE(points.size() == 2);
  CHECK(points[1].config.n == 50);

  const std::vector<std::string> grids{"5x100", "3x7"};
  points = MakeSweepPoints(SweepAxis::kGrid, grids, model, base);
  CHECK(points[1].config.m_count == 3);
  CHECK(points[1].config.q_count == 7);

  const std::vector<std::string> costs{"1.5:7:10@0.704", "1.5:4:10@0.716"};
  points = MakeSweepPoints(SweepAxis::kCostProfile, costs, model, base);
  CHECK(points[1].config.costs.l_cloud == 4.0);
  CHECK(MeanCloudAccuracy(points[0].model) == doctest::Approx(0.704));
  CHECK(MeanCloudAccuracy(points[1].model) == doctest::Approx(0.716));

  const std::vector<std::string> bad_alpha{"1.5"};
  CHECK_THROWS_AS(MakeSweepPoints(SweepAxis::kAlpha, bad_alpha, model, base), ValidationError);
  const std::vector<std::string> bad_grid{"1x5"};
  CHECK_THROWS_AS(MakeSweepPoints(SweepAxis::kGrid, bad_grid, model, base), ValidationError);
  CHECK_THROWS_AS(MakeSweepPoints(SweepAxis::kAlpha, {}, model, base), ValidationError);

  const std::vector<std::string> alphas{"0.2", "0.4"};
  const auto rows = RunSweep(MakeSweepPoints(SweepAxis::kAlpha, alphas, model, base), 4, 1);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].label == "0.2");
  CHECK(rows[1].summary.config.alpha == 0.4);
}

TEST_CASE("grid and cost string parsing") {
  CHECK(ParseGridSpec("5x100") == std::pair{5, 100});
  CHECK_THROWS_AS(ParseGridSpec("5*100"), ValidationError);
  CHECK(ParseCostSpec("1.5,7,10") == CostModel{1.5, 7, 10, 1});
  CHECK(ParseCostSpec("1.5:4:10") == CostModel{1.5, 4, 10, 1});
  CHECK_THROWS_AS(ParseCostSpec("1.5,7"), ValidationError);
  CHECK_THROWS_AS(ParseCostSpec("a,b,c"), ValidationError);
}
