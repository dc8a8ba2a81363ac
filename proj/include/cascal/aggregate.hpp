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

#ifndef CASCAL_AGGREGATE_HPP_
#define CASCAL_AGGREGATE_HPP_

// Confidence / epistemic-uncertainty scores from raw model outputs.
//
// White-box: members of a weight ensemble each give a label distribution.
//   confidence  = max over labels of the member-averaged distribution
//   uncertainty = mean over members of (member max - confidence)^2
// Black-box: K prompt variants each give a self-confidence in [0, 1].
//   confidence  = mean
//   uncertainty = sample variance, divisor K - 1
//
// The two uncertainty divisors differ on purpose (member count vs K - 1).

#include <span>
#include <vector>

#include "cascal/cascade.hpp"

namespace cascal {

struct AggregatedScores {
  double confidence = 0.0;
  double uncertainty = 0.0;
};

// Requires K >= 2 values in [0, 1].
AggregatedScores AggregatePromptScores(std::span<const double> confidences);

// Requires >= 2 members of equal, non-zero length with non-negative entries
// summing to 1 within 1e-6.
AggregatedScores AggregateEnsemble(std::span<const std::vector<double>> members);

struct WhiteBoxRawRecord {
  std::vector<std::vector<double>> edge_members;
  std::vector<std::vector<double>> cloud_members;
  bool edge_correct = false;
  bool cloud_correct = false;
};

struct BlackBoxRawRecord {
  std::vector<double> edge_confidences;
  std::vector<double> cloud_confidences;
  bool edge_correct = false;
  bool cloud_correct = false;
};

CascadeRecord AggregateRecord(const WhiteBoxRawRecord& raw);
CascadeRecord AggregateRecord(const BlackBoxRawRecord& raw);

}  // namespace cascal

#endif  // CASCAL_AGGREGATE_HPP_
