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
#include <random>

#include "cascal/risk.hpp"
#include "test_support.hpp"

using namespace cascal;

namespace {

const Thresholds kHalf{0.5, 0.5};
const CascadeRecord kEdgeRight{0.2, 0.8, 0.9, 0.9, true, false};
const CascadeRecord kEdgeWrong{0.1, 0.9, 0.9, 0.9, false, true};
const CascadeRecord kCloudRight{0.7, 0.9, 0.3, 0.6, false, true};
const CascadeRecord kCloudWrong{0.7, 0.9, 0.3, 0.6, true, false};
const CascadeRecord kHuman{0.3, 0.4, 0.0, 1.0, false, false};

}  // namespace

TEST_CASE("empirical misalignment of a four-record dataset") {
  const std::vector<CascadeRecord> data{kEdgeRight, kEdgeWrong, kCloudRight, kHuman};
  // Losses by hand: 0, 1, 0, 0.
  CHECK(EmpiricalMisalignment(data, kHalf) == 0.25);
  CHECK(EmpiricalMisalignment(data, kHumanFallback) == 0.0);
  const std::vector<CascadeRecord> all_right{kEdgeRight, kCloudRight, kHuman};
  CHECK(EmpiricalMisalignment(all_right, kHalf) == 0.0);
}

TEST_CASE("empirical cost of a 60/30/10 tier mix") {
  std::vector<CascadeRecord> data;
  for (int i = 0; i < 6; ++i) data.push_back(kEdgeRight);
  for (int i = 0; i < 3; ++i) data.push_back(kCloudWrong);
  data.push_back(kHuman);
  const CostModel costs{1.5, 7, 10, 1};
  CHECK(EmpiricalCost(data, kHalf, costs) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(EmpiricalCost(data, kHumanFallback, costs) == 10.0);
  CHECK(EmpiricalCost(std::vector<CascadeRecord>{kEdgeRight}, kHalf, {1.5, 7, 10, 10}) == 15.0);
}

TEST_CASE("empty dataset is rejected") {
  const std::vector<CascadeRecord> empty;
  CHECK_THROWS_AS(EmpiricalMisalignment(empty, kHalf), ValidationError);
  CHECK_THROWS_AS(EmpiricalCost(empty, kHalf, {1, 2, 3, 1}), ValidationError);
  CHECK_THROWS_AS(BuildRiskSurface(empty, MakeGrid(2, 2), {1, 2, 3, 1}, 0.3), ValidationError);
}

TEST_CASE("hoeffding p-value scalar values") {
  CHECK(HoeffdingPValue(0.3, 0.3, 100) == 1.0);
  CHECK(HoeffdingPValue(0.5, 0.3, 100) == 1.0);
  // exp(-2) and exp(-8), evaluated independently.
  CHECK(std::abs(HoeffdingPValue(0.2, 0.3, 100) / 0.1353352832366127 - 1.0) < 1e-12);
  CHECK(std::abs(HoeffdingPValue(0.1, 0.3, 100) / 0.00033546262790251185 - 1.0) < 1e-12);
  // Underflow is clamped so the value stays strictly positive.
  CHECK(HoeffdingPValue(0.0, 0.99, 1000000) > 0.0);
}

TEST_CASE("property: hoeffding monotonicity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const double r = unit(rng), a = unit(rng) * 0.98 + 0.01;
    const std::size_t n = 1 + rng() % 500;
    const double p = HoeffdingPValue(r, a, n);
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
    CHECK((p == 1.0) == (r >= a));
    CHECK(HoeffdingPValue(r, std::min(0.999, a + 0.01), n) <= p);
    CHECK(HoeffdingPValue(std::min(1.0, r + 0.01), a, n) >= p);
    if (r < a) CHECK(HoeffdingPValue(r, a, n + 10) <= p);
  }
}

TEST_CASE("surface of a single record on a 2x2 grid") {
  const CascadeRecord r{0.2, 0.8, 0.9, 0.1, false, true};
  const RiskSurface s = BuildRiskSurface(std::vector<CascadeRecord>{r}, MakeGrid(2, 2),
                                         {1.5, 7, 10, 1}, 0.3);
  // (0,0) human, (0,1) human, (1,0) edge and wrong, (1,1) human.
  CHECK(s.misalignment(0, 0) == 0.0);
  CHECK(s.misalignment(0, 1) == 0.0);
  CHECK(s.misalignment(1, 0) == 1.0);
  CHECK(s.misalignment(1, 1) == 0.0);
  CHECK(s.cost(0, 0) == 10.0);
  CHECK(s.cost(1, 0) == 1.5);
  CHECK(s.cost(1, 1) == 10.0);
  CHECK(s.p_value(1, 0) == 1.0);
  CHECK(std::abs(s.p_value(0, 0) / 0.835270211411272 - 1.0) < 1e-12);
  CHECK(s.n == 1);
}

TEST_CASE("property: sweep surface equals the naive per-pair surface") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto data = testing::RandomDataset(rng, 1 + rng() % 200);
    const ThresholdGrid grid(testing::RandomInt(rng, 2, 9), testing::RandomInt(rng, 2, 60));
    const CostModel costs{1.5, 7, 10, testing::RandomInt(rng, 1, 10)};
    const RiskSurface fast = BuildRiskSurface(data, grid, costs, 0.3, SurfaceAlgorithm::kSweep);
    const RiskSurface naive = BuildRiskSurface(data, grid, costs, 0.3, SurfaceAlgorithm::kNaive);
    CHECK(fast.misalignment == naive.misalignment);
    CHECK(fast.cost == naive.cost);
    CHECK(fast.p_value == naive.p_value);
    // And each entry equals the standalone estimators.
    const int m = testing::RandomInt(rng, 0, grid.m_count() - 1);
    const int q = testing::RandomInt(rng, 0, grid.q_count() - 1);
    CHECK(fast.misalignment(m, q) == EmpiricalMisalignment(data, grid.at(m, q)));
    CHECK(fast.cost(m, q) == EmpiricalCost(data, grid.at(m, q), costs));
    CHECK(fast.p_value(m, q) == HoeffdingPValue(fast.misalignment(m, q), 0.3, data.size()));
  }
}

TEST_CASE("property: surface rows are monotone in lambda") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto data = testing::RandomDataset(rng, 1 + rng() % 150);
    const ThresholdGrid grid(testing::RandomInt(rng, 2, 6), testing::RandomInt(rng, 2, 50));
    const RiskSurface s = BuildRiskSurface(data, grid, {1.5, 7, 10, 1}, 0.3);
    for (int m = 0; m < grid.m_count(); ++m) {
      for (int q = 1; q < grid.q_count(); ++q) {
        CHECK(s.misalignment(m, q) <= s.misalignment(m, q - 1));
        CHECK(s.p_value(m, q) <= s.p_value(m, q - 1));
      }
    }
  }
}

TEST_CASE("property: estimates are invariant to duplicating the dataset") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto data = testing::RandomDataset(rng, 1 + rng() % 100);
    auto doubled = data;
    doubled.insert(doubled.end(), data.begin(), data.end());
    const Thresholds t{testing::RandomScore(rng), testing::RandomScore(rng)};
    const CostModel costs{1.5, 7, 10, 1};
    CHECK(EmpiricalMisalignment(doubled, t) == EmpiricalMisalignment(data, t));
    CHECK(EmpiricalCost(doubled, t, costs) == doctest::Approx(EmpiricalCost(data, t, costs)));
  }
}

TEST_CASE("rebuilding p-values for a new alpha keeps the risk matrices") {
  std::mt19937_64 rng(8);
  const auto data = testing::RandomDataset(rng, 80);
  const ThresholdGrid grid(4, 25);
  RiskSurface s = BuildRiskSurface(data, grid, {1.5, 7, 10, 1}, 0.3);
  const Matrix misalignment = s.misalignment;
  RebuildPValues(s, 0.1);
  const RiskSurface fresh = BuildRiskSurface(data, grid, {1.5, 7, 10, 1}, 0.1);
  CHECK(s.misalignment == misalignment);
  CHECK(s.p_value == fresh.p_value);
  CHECK(s.alpha == 0.1);
}
