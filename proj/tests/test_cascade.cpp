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

#include <random>

#include "cascal/cascade.hpp"
#include "test_support.hpp"

using namespace cascal;

TEST_CASE("grid 5x100 matches the uniform lattice") {
  const ThresholdGrid grid = MakeGrid(5, 100);
  CHECK(grid.size() == 500);
  const double expected_eps[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int m = 0; m < 5; ++m) CHECK(grid.epsilon(m) == expected_eps[m]);
  CHECK(grid.lambda(0) == 0.0);
  CHECK(grid.lambda(1) == doctest::Approx(1.0 / 99.0).epsilon(1e-15));
  CHECK(grid.lambda(99) == 1.0);
  for (int q = 1; q < 100; ++q) CHECK(grid.lambda(q) > grid.lambda(q - 1));
}

TEST_CASE("grid 2x2 holds the four corners") {
  const auto pairs = MakeGrid(2, 2).pairs();
  REQUIRE(pairs.size() == 4);
  CHECK(pairs[0] == Thresholds{0, 0});
  CHECK(pairs[1] == Thresholds{0, 1});
  CHECK(pairs[2] == Thresholds{1, 0});
  CHECK(pairs[3] == Thresholds{1, 1});
}

TEST_CASE("degenerate grids are rejected") {
  CHECK_THROWS_AS(MakeGrid(1, 5), ValidationError);
  CHECK_THROWS_AS(MakeGrid(5, 1), ValidationError);
  CHECK_THROWS_AS(MakeGrid(0, 0), ValidationError);
}

TEST_CASE("routing examples") {
  const Thresholds half{0.5, 0.5};
  CHECK(Route({0.2, 0.8, 0.9, 0.1, true, true}, half) == Tier::kEdge);
  CHECK(Route({0.7, 0.9, 0.3, 0.6, true, true}, half) == Tier::kCloud);
  // Knowledge pass, confidence fail at the edge goes straight to the human.
  CHECK(Route({0.3, 0.4, 0.0, 1.0, true, true}, half) == Tier::kHuman);
  // Cloud fails either test.
  CHECK(Route({0.7, 0.9, 0.6, 0.9, true, true}, half) == Tier::kHuman);
  CHECK(Route({0.7, 0.9, 0.3, 0.5, true, true}, half) == Tier::kHuman);
}

TEST_CASE("inequalities are strict") {
  // u == epsilon fails the knowledge test; c == lambda fails the confidence test.
  CHECK(Route({0.5, 0.9, 0.0, 0.9, true, true}, {0.5, 0.5}) == Tier::kCloud);
  CHECK(Route({0.4, 0.5, 0.0, 0.9, true, true}, {0.5, 0.5}) == Tier::kHuman);
  CHECK(Route({0.6, 0.9, 0.2, 0.5, true, true}, {0.5, 0.5}) == Tier::kHuman);
}

TEST_CASE("fallback (0, 1) routes everything to the human") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const CascadeRecord r = testing::RandomRecord(rng);
    CHECK(Route(r, kHumanFallback) == Tier::kHuman);
    CHECK(MisalignmentLoss(r, kHumanFallback) == 0);
  }
  CHECK(Route({0.0, 1.0, 0.0, 1.0, false, false}, kHumanFallback) == Tier::kHuman);
}

TEST_CASE("misalignment loss per tier") {
  const Thresholds half{0.5, 0.5};
  CHECK(MisalignmentLoss({0.2, 0.8, 0, 0, true, false}, half) == 0);
  CHECK(MisalignmentLoss({0.2, 0.8, 0, 0, false, true}, half) == 1);
  CHECK(MisalignmentLoss({0.7, 0.9, 0.3, 0.6, true, false}, half) == 1);
  CHECK(MisalignmentLoss({0.7, 0.9, 0.3, 0.6, false, true}, half) == 0);
  CHECK(MisalignmentLoss({0.3, 0.4, 0.0, 1.0, false, false}, half) == 0);
}

TEST_CASE("cost loss charges exactly one tier") {
  const Thresholds half{0.5, 0.5};
  const CascadeRecord edge{0.2, 0.8, 0, 0, true, true};
  const CascadeRecord human{0.3, 0.4, 0, 1, true, true};
  const CascadeRecord cloud{0.7, 0.9, 0.3, 0.6, true, true};
  CHECK(CostLoss(edge, half, {1.5, 7, 10, 1}) == 1.5);
  CHECK(CostLoss(edge, half, {1.5, 7, 10, 10}) == 15.0);
  CHECK(CostLoss(cloud, half, {1.5, 7, 10, 10}) == 70.0);
  CHECK(CostLoss(human, half, {1.5, 7, 10, 10}) == 10.0);
}

TEST_CASE("cost validation warns on ordering, rejects negatives") {
  CHECK(ValidateCosts({1.5, 7, 10, 1}).empty());
  CHECK_FALSE(ValidateCosts({7, 1.5, 10, 1}).empty());
  CHECK_THROWS_AS(ValidateCosts({-1, 7, 10, 1}), ValidationError);
  CHECK_THROWS_AS(ValidateCosts({1, 7, 10, 0}), ValidationError);
}

TEST_CASE("record validation") {
  CHECK_NOTHROW(ValidateRecord({0, 1, 0, 1, true, false}));
  CHECK_THROWS_AS(ValidateRecord({1.3, 0.5, 0.5, 0.5, true, true}), ValidationError);
  CHECK_THROWS_AS(ValidateRecord({0.5, -0.1, 0.5, 0.5, true, true}), ValidationError);
  CHECK_THROWS_AS(ValidateRecord({0.5, 0.5, std::nan(""), 0.5, true, true}), ValidationError);
}

TEST_CASE("property: partition and lambda monotonicity") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5000; ++i) {
    const CascadeRecord r = testing::RandomRecord(rng);
    const double eps = testing::RandomScore(rng);
    const double lam_hi = testing::RandomScore(rng);
    const double lam_lo = lam_hi * testing::RandomScore(rng);
    const Tier hi = Route(r, {eps, lam_hi});
    const Tier lo = Route(r, {eps, lam_lo});
    if (hi != Tier::kHuman) CHECK(lo == hi);
    CHECK(MisalignmentLoss(r, {eps, lam_lo}) >= MisalignmentLoss(r, {eps, lam_hi}));
    const CostModel costs{1.5, 7, 10, 3};
    const double c = CostLoss(r, {eps, lam_hi}, costs);
    CHECK((c == 4.5 || c == 21.0 || c == 10.0));
  }
}

TEST_CASE("fixed policies ignore the scores") {
  const CascadeRecord r{0.9, 0.1, 0.9, 0.1, true, false};
  CHECK(Policy::Fixed(Tier::kEdge).Route(r) == Tier::kEdge);
  CHECK(Policy::Fixed(Tier::kCloud).Route(r) == Tier::kCloud);
  CHECK(Policy::FromThresholds({0.5, 0.5}).Route(r) == Tier::kHuman);
}
