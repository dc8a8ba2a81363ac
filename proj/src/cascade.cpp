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

#include "cascal/cascade.hpp"

#include <sstream>

namespace cascal {
namespace {

void CheckUnit(double value, const char* field) {
  // Negated comparison so NaN is rejected too.
  if (!(value >= 0.0 && value <= 1.0)) {
    std::ostringstream msg;
    msg << field << " = " << value << " is outside [0, 1]";
    throw ValidationError(msg.str());
  }
}

}  // namespace

void ValidateRecord(const CascadeRecord& record) {
  CheckUnit(record.u_edge, "u_edge");
  CheckUnit(record.c_edge, "c_edge");
  CheckUnit(record.u_cloud, "u_cloud");
  CheckUnit(record.c_cloud, "c_cloud");
}

std::string_view TierName(Tier tier) {
  switch (tier) {
    case Tier::kEdge:
      return "edge";
    case Tier::kCloud:
      return "cloud";
    case Tier::kHuman:
      return "human";
  }
  return "unknown";
}

std::optional<Tier> ParseTier(std::string_view name) {
  if (name == "edge") return Tier::kEdge;
  if (name == "cloud") return Tier::kCloud;
  if (name == "human") return Tier::kHuman;
  return std::nullopt;
}

double CostModel::TierCost(Tier tier) const {
  switch (tier) {
    case Tier::kEdge:
      return call_multiplier * l_edge;
    case Tier::kCloud:
      return call_multiplier * l_cloud;
    case Tier::kHuman:
      return l_human;
  }
  return l_human;
}

std::string ValidateCosts(const CostModel& costs) {
  if (!(costs.l_edge >= 0.0) || !(costs.l_cloud >= 0.0) || !(costs.l_human >= 0.0)) {
    throw ValidationError("tier costs must be non-negative");
  }
  if (costs.call_multiplier < 1) {
    throw ValidationError("call multiplier must be a positive integer");
  }
  if (!(costs.l_human >= costs.l_cloud && costs.l_cloud >= costs.l_edge)) {
    std::ostringstream msg;
    msg << "cost ordering l_human >= l_cloud >= l_edge does not hold (" << costs.l_edge
        << ", " << costs.l_cloud << ", " << costs.l_human << ")";
    return msg.str();
  }
  return {};
}

ThresholdGrid::ThresholdGrid(int m_count, int q_count) : m_count_(m_count), q_count_(q_count) {
  if (m_count < 2 || q_count < 2) {
    std::ostringstream msg;
    msg << "grid dimensions must be at least 2x2, got " << m_count << "x" << q_count;
    throw ValidationError(msg.str());
  }
}

double ThresholdGrid::epsilon(int m) const {
  return static_cast<double>(m) / static_cast<double>(m_count_ - 1);
}

double ThresholdGrid::lambda(int q) const {
  return static_cast<double>(q) / static_cast<double>(q_count_ - 1);
}

std::vector<Thresholds> ThresholdGrid::pairs() const {
  std::vector<Thresholds> out;
  out.reserve(size());
  for (int m = 0; m < m_count_; ++m) {
    for (int q = 0; q < q_count_; ++q) out.push_back(at(m, q));
  }
  return out;
}

ThresholdGrid MakeGrid(int m_count, int q_count) { return ThresholdGrid(m_count, q_count); }

Tier Route(const CascadeRecord& record, const Thresholds& thresholds) {
  if (record.u_edge < thresholds.epsilon) {
    return record.c_edge > thresholds.lambda ? Tier::kEdge : Tier::kHuman;
  }
  if (record.u_cloud < thresholds.epsilon && record.c_cloud > thresholds.lambda) {
    return Tier::kCloud;
  }
  return Tier::kHuman;
}

int MisalignmentForTier(const CascadeRecord& record, Tier tier) {
  switch (tier) {
    case Tier::kEdge:
      return record.edge_correct ? 0 : 1;
    case Tier::kCloud:
      return record.cloud_correct ? 0 : 1;
    case Tier::kHuman:
      return 0;
  }
  return 0;
}

int MisalignmentLoss(const CascadeRecord& record, const Thresholds& thresholds) {
  return MisalignmentForTier(record, Route(record, thresholds));
}

double CostLoss(const CascadeRecord& record, const Thresholds& thresholds,
                const CostModel& costs) {
  return costs.TierCost(Route(record, thresholds));
}

}  // namespace cascal
