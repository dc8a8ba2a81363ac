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

#include "cascal/synthetic.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "file_util.hpp"
#include "rng.hpp"

namespace cascal {
namespace {

using Json = nlohmann::ordered_json;

CascadeRecord RecordFor(const ScoreType& type) {
  return {type.u_edge, type.c_edge, type.u_cloud, type.c_cloud, false, false};
}

double Round3(double x) { return std::round(x * 1000.0) / 1000.0; }

double Clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

void CheckUnit(double value, std::size_t index, const char* field) {
  if (!(value >= 0.0 && value <= 1.0)) {
    std::ostringstream msg;
    msg << "model type " << index << ": " << field << " = " << value << " is outside [0, 1]";
    throw ValidationError(msg.str());
  }
}

}  // namespace

void ValidateModel(const DiscreteScoreModel& model) {
  if (model.types.empty()) throw ValidationError("model has no types");
  double total = 0.0;
  for (std::size_t i = 0; i < model.types.size(); ++i) {
    const ScoreType& t = model.types[i];
    if (!(t.weight > 0.0)) {
      std::ostringstream msg;
      msg << "model type " << i << ": weight must be strictly positive";
      throw ValidationError(msg.str());
    }
    CheckUnit(t.u_edge, i, "u_edge");
    CheckUnit(t.c_edge, i, "c_edge");
    CheckUnit(t.u_cloud, i, "u_cloud");
    CheckUnit(t.c_cloud, i, "c_cloud");
    CheckUnit(t.a_edge, i, "a_edge");
    CheckUnit(t.a_cloud, i, "a_cloud");
    total += t.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "model weights sum to " << total << ", expected 1";
    throw ValidationError(msg.str());
  }
}

std::vector<CascadeRecord> SampleDataset(const DiscreteScoreModel& model, std::size_t n,
                                         std::uint64_t seed) {
  if (n == 0) throw ValidationError("sample size must be at least 1");
  ValidateModel(model);

  std::vector<double> cumulative;
  cumulative.reserve(model.types.size());
  double acc = 0.0;
  for (const auto& t : model.types) {
    acc += t.weight;
    cumulative.push_back(acc);
  }

  std::mt19937_64 rng = internal::SeededEngine(seed);
  std::vector<CascadeRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u_type = internal::Uniform(rng);
    const double u_edge = internal::Uniform(rng);
    const double u_cloud = internal::Uniform(rng);
    std::size_t t = 0;
    while (t + 1 < cumulative.size() && !(u_type < cumulative[t])) ++t;
    const ScoreType& type = model.types[t];
    CascadeRecord r = RecordFor(type);
    r.edge_correct = u_edge < type.a_edge;
    r.cloud_correct = u_cloud < type.a_cloud;
    out.push_back(r);
  }
  return out;
}

double TrueMisalignment(const DiscreteScoreModel& model, const Policy& policy) {
  double risk = 0.0;
  for (const auto& t : model.types) {
    switch (policy.Route(RecordFor(t))) {
      case Tier::kEdge:
        risk += t.weight * (1.0 - t.a_edge);
        break;
      case Tier::kCloud:
        risk += t.weight * (1.0 - t.a_cloud);
        break;
      case Tier::kHuman:
        break;
    }
  }
  return risk;
}

double TrueMisalignment(const DiscreteScoreModel& model, const Thresholds& thresholds) {
  return TrueMisalignment(model, Policy::FromThresholds(thresholds));
}

double TrueCost(const DiscreteScoreModel& model, const Policy& policy, const CostModel& costs) {
  // Weights sum to 1 only up to rounding, so a policy that sends every type
  // to one tier is charged that tier's cost exactly.
  double mass[3] = {0.0, 0.0, 0.0};
  std::size_t hits[3] = {0, 0, 0};
  for (const auto& t : model.types) {
    const auto tier = static_cast<std::size_t>(policy.Route(RecordFor(t)));
    mass[tier] += t.weight;
    ++hits[tier];
  }
  double cost = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double tier_cost = costs.TierCost(static_cast<Tier>(k));
    if (hits[k] == model.types.size()) return tier_cost;
    cost += mass[k] * tier_cost;
  }
  return cost;
}

double TrueCost(const DiscreteScoreModel& model, const Thresholds& thresholds,
                const CostModel& costs) {
  return TrueCost(model, Policy::FromThresholds(thresholds), costs);
}

DiscreteScoreModel DefaultModel() {
  constexpr int kTypes = 20;
  DiscreteScoreModel model;
  model.types.reserve(kTypes);
  for (int t = 0; t < kTypes; ++t) {
    const double d = static_cast<double>(t) / (kTypes - 1);
    ScoreType type;
    type.weight = 1.0 / kTypes;
    type.u_edge = Round3(Clamp01(0.03 + 0.92 * d + 0.03 * std::sin(1.3 * t)));
    type.c_edge = Round3(Clamp01(0.96 - 0.55 * d + 0.04 * std::sin(2.3 * t)));
    type.u_cloud = Round3(Clamp01(0.02 + 0.60 * d + 0.05 * std::sin(1.7 * t)));
    type.c_cloud = Round3(Clamp01(0.97 - 0.35 * d + 0.03 * std::cos(1.1 * t)));
    type.a_edge = Round3(0.95 - 0.40 * d);
    type.a_cloud = Round3(0.98 - 0.33 * d);
    model.types.push_back(type);
  }
  return model;
}

DiscreteScoreModel BoundaryModel() {
  constexpr int kTypes = 10;
  DiscreteScoreModel model;
  for (int t = 0; t < kTypes; ++t) {
    ScoreType type;
    type.weight = 1.0 / kTypes;
    type.u_edge = 0.1;
    type.c_edge = Round3(0.95 - 0.1 * t);
    // Never passes the cloud knowledge test.
    type.u_cloud = 1.0;
    type.c_cloud = 0.5;
    type.a_edge = Round3(0.9 - 0.05 * t);
    type.a_cloud = 0.5;
    model.types.push_back(type);
  }
  return model;
}

double MeanCloudAccuracy(const DiscreteScoreModel& model) {
  double mean = 0.0;
  for (const auto& t : model.types) mean += t.weight * t.a_cloud;
  return mean;
}

DiscreteScoreModel WithMeanCloudAccuracy(const DiscreteScoreModel& model, double target) {
  const double shift = target - MeanCloudAccuracy(model);
  DiscreteScoreModel out = model;
  for (auto& t : out.types) {
    t.a_cloud += shift;
    if (t.a_cloud < 0.0 || t.a_cloud > 1.0) {
      throw ValidationError("cloud accuracy shift leaves [0, 1]");
    }
  }
  return out;
}

DiscreteScoreModel ParseModelJson(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("types") || !doc["types"].is_array()) {
    throw ValidationError("model file must be an object with a \"types\" array");
  }
  DiscreteScoreModel model;
  std::size_t index = 0;
  for (const auto& entry : doc["types"]) {
    auto field = [&](const char* name) {
      if (!entry.is_object() || !entry.contains(name) || !entry[name].is_number()) {
        std::ostringstream msg;
        msg << "model type " << index << ": missing numeric field \"" << name << "\"";
        throw ValidationError(msg.str());
      }
      return entry[name].get<double>();
    };
    ScoreType t;
    t.weight = field("weight");
    t.u_edge = field("u_edge");
    t.c_edge = field("c_edge");
    t.u_cloud = field("u_cloud");
    t.c_cloud = field("c_cloud");
    t.a_edge = field("a_edge");
    t.a_cloud = field("a_cloud");
    model.types.push_back(t);
    ++index;
  }
  ValidateModel(model);
  return model;
}

std::string ModelToJson(const DiscreteScoreModel& model) {
  Json types = Json::array();
  for (const auto& t : model.types) {
    types.push_back(Json{{"weight", t.weight},   {"u_edge", t.u_edge},   {"c_edge", t.c_edge},
                         {"u_cloud", t.u_cloud}, {"c_cloud", t.c_cloud}, {"a_edge", t.a_edge},
                         {"a_cloud", t.a_cloud}});
  }
  return Json{{"types", types}}.dump(2) + "\n";
}

DiscreteScoreModel LoadModel(const std::filesystem::path& path) {
  try {
    return ParseModelJson(internal::ReadFile(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void SaveModel(const DiscreteScoreModel& model, const std::filesystem::path& path) {
  internal::WriteFile(path, ModelToJson(model));
}

CalibrationOutcome ReferenceMhtErm(std::span<const CascadeRecord> dataset, int m_count,
                                   int q_count, double alpha, double delta,
                                   const CostModel& costs) {
  if (m_count < 2 || q_count < 2) throw ValidationError("grid dimensions must be at least 2x2");
  if (dataset.empty()) throw ValidationError("dataset must contain at least one record");
  if (!(alpha > 0.0 && alpha < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("alpha and delta must lie in (0, 1)");
  }

  CalibrationOutcome out;
  out.method = Method::kMhtErm;
  out.alpha = alpha;
  out.delta = delta;

  const std::size_t n = dataset.size();
  for (int m = 1; m <= m_count; ++m) {
    const double epsilon = static_cast<double>(m - 1) / static_cast<double>(m_count - 1);
    int stop = 0;
    for (int q = q_count; q >= 1; --q) {
      const double lambda = static_cast<double>(q - 1) / static_cast<double>(q_count - 1);
      const Thresholds phi{epsilon, lambda};
      std::size_t errors = 0;
      for (const auto& record : dataset) {
        errors += static_cast<std::size_t>(MisalignmentLoss(record, phi));
      }
      const double r_hat = static_cast<double>(errors) / static_cast<double>(n);
      const double p = HoeffdingPValue(r_hat, alpha, n);
      if (p <= delta / m_count) {
        out.certified_set.push_back(phi);
      } else {
        stop = q;
        break;
      }
    }
    out.stop_indices.push_back(stop);
  }

  if (out.certified_set.empty()) {
    out.certified_set.push_back(kHumanFallback);
    out.fallback_used = true;
  }
  const Thresholds selected = SelectMinCost(out.certified_set, dataset, costs);
  out.policy = Policy::FromThresholds(selected);
  out.calibration_misalignment = EmpiricalMisalignment(dataset, selected);
  out.calibration_cost = EmpiricalCost(dataset, selected, costs);
  return out;
}

}  // namespace cascal
