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

#include "cascal/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cascal {

AggregatedScores AggregatePromptScores(std::span<const double> confidences) {
  const std::size_t k = confidences.size();
  if (k < 2) throw ValidationError("prompt ensemble needs at least 2 confidences");
  double sum = 0.0;
  for (double c : confidences) {
    if (!(c >= 0.0 && c <= 1.0)) {
      std::ostringstream msg;
      msg << "self-confidence " << c << " is outside [0, 1]";
      throw ValidationError(msg.str());
    }
    sum += c;
  }
  const double mean = sum / static_cast<double>(k);
  double ss = 0.0;
  for (double c : confidences) ss += (c - mean) * (c - mean);
  return {mean, ss / static_cast<double>(k - 1)};
}

AggregatedScores AggregateEnsemble(std::span<const std::vector<double>> members) {
  if (members.size() < 2) throw ValidationError("ensemble needs at least 2 members");
  const std::size_t labels = members.front().size();
  if (labels == 0) throw ValidationError("ensemble distributions are empty");

  std::vector<double> mean(labels, 0.0);
  std::vector<double> member_max;
  member_max.reserve(members.size());
  for (std::size_t w = 0; w < members.size(); ++w) {
    const auto& dist = members[w];
    if (dist.size() != labels) {
      std::ostringstream msg;
      msg << "ensemble member " << w << " has " << dist.size() << " labels, expected " << labels;
      throw ValidationError(msg.str());
    }
    double total = 0.0;
    for (double p : dist) {
      if (!(p >= 0.0)) throw ValidationError("ensemble probabilities must be non-negative");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-6) {
      std::ostringstream msg;
      msg << "ensemble member " << w << " sums to " << total << ", expected 1";
      throw ValidationError(msg.str());
    }
    for (std::size_t y = 0; y < labels; ++y) mean[y] += dist[y];
    member_max.push_back(*std::max_element(dist.begin(), dist.end()));
  }
  const double count = static_cast<double>(members.size());
  for (double& p : mean) p /= count;
  // Normalisation slack of 1e-6 may push the maximum a hair above 1.
  const double confidence = std::min(1.0, *std::max_element(mean.begin(), mean.end()));

  double ss = 0.0;
  for (double mx : member_max) ss += (mx - confidence) * (mx - confidence);
  return {confidence, ss / count};
}

CascadeRecord AggregateRecord(const WhiteBoxRawRecord& raw) {
  const AggregatedScores edge = AggregateEnsemble(raw.edge_members);
  const AggregatedScores cloud = AggregateEnsemble(raw.cloud_members);
  return {edge.uncertainty, edge.confidence, cloud.uncertainty, cloud.confidence,
          raw.edge_correct, raw.cloud_correct};
}

CascadeRecord AggregateRecord(const BlackBoxRawRecord& raw) {
  const AggregatedScores edge = AggregatePromptScores(raw.edge_confidences);
  const AggregatedScores cloud = AggregatePromptScores(raw.cloud_confidences);
  return {edge.uncertainty, edge.confidence, cloud.uncertainty, cloud.confidence,
          raw.edge_correct, raw.cloud_correct};
}

}  // namespace cascal
