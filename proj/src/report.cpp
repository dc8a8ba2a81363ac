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

#include "cascal/report.hpp"

#include <charconv>

#include <json.hpp>

#include "cascal/synthetic.hpp"
#include "file_util.hpp"

namespace cascal {
namespace {

using Json = nlohmann::ordered_json;

Json Header() {
  return Json{{"tool", "cascal"},
              {"version", std::string(kToolVersion)},
              {"schema_version", kReportSchemaVersion}};
}

Json CostsJson(const CostModel& costs) {
  return Json{{"edge", costs.l_edge},
              {"cloud", costs.l_cloud},
              {"human", costs.l_human},
              {"call_multiplier", costs.call_multiplier}};
}

Json PolicyFields(const Policy& policy) {
  Json out;
  if (policy.is_fixed()) {
    out["policy"] = "fixed";
    out["fixed_tier"] = std::string(TierName(*policy.fixed_tier()));
    out["selected"] = nullptr;
  } else {
    out["policy"] = "thresholds";
    out["selected"] =
        Json{{"epsilon", policy.thresholds().epsilon}, {"lambda", policy.thresholds().lambda}};
  }
  return out;
}

Json MethodSummaryJson(const MethodSummary& s) {
  return Json{{"method", std::string(MethodName(s.method))},
              {"trials", s.trials},
              {"violations", s.violations},
              {"violation_rate", s.violation_rate},
              {"mean_misalignment", s.mean_misalignment},
              {"std_misalignment", s.std_misalignment},
              {"mean_cost", s.mean_cost},
              {"std_cost", s.std_cost},
              {"quantile_misalignment", s.quantile_misalignment},
              {"iqr_max_misalignment", s.iqr_max_misalignment},
              {"iqr_max_cost", s.iqr_max_cost},
              {"fallback_rate", s.fallback_rate},
              {"mean_calibration_cost", s.mean_calibration_cost}};
}

Json ConfigJson(const ExperimentConfig& config, Evaluation evaluation) {
  Json methods = Json::array();
  for (Method m : config.methods) methods.push_back(std::string(MethodName(m)));
  Json out{{"methods", methods},
           {"n", config.n},
           {"alpha", config.alpha},
           {"delta", config.delta},
           {"grid", Json{{"m", config.m_count}, {"q", config.q_count}}},
           {"costs", CostsJson(config.costs)}};
  if (evaluation == Evaluation::kTestSet) out["test_size"] = config.test_size;
  return out;
}

Json SummaryBody(const McSummary& summary) {
  Json out{{"evaluation", std::string(EvaluationName(summary.evaluation))},
           {"generator", std::string(kGeneratorName)},
           {"trials", summary.trials},
           {"base_seed", summary.base_seed},
           {"config", ConfigJson(summary.config, summary.evaluation)}};
  Json methods = Json::array();
  for (const auto& s : summary.methods) methods.push_back(MethodSummaryJson(s));
  out["methods"] = methods;
  return out;
}

std::string Number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

const Json& Require(const Json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw ValidationError(std::string("calibration report lacks \"") + name + "\"");
  }
  return obj[name];
}

}  // namespace

std::string CalibrationReportJson(const CalibrationOutcome& outcome,
                                  const CalibrationReportContext& context) {
  Json out = Header();
  out["method"] = std::string(MethodName(outcome.method));
  out["alpha"] = outcome.alpha;
  out["delta"] = outcome.delta;
  out["grid"] = Json{{"m", context.grid.m_count()}, {"q", context.grid.q_count()}};
  out["costs"] = CostsJson(context.costs);
  out["mode"] = context.mode;
  out["data"] = context.data_path;
  out["n"] = context.n;
  out.update(PolicyFields(outcome.policy));
  out["fallback_used"] = outcome.fallback_used;
  out["certified_count"] = outcome.certified_set.size();
  Json certified = Json::array();
  for (const auto& t : outcome.certified_set) certified.push_back(Json::array({t.epsilon, t.lambda}));
  out["certified_set"] = certified;
  if (outcome.method == Method::kMhtErm) out["stop_indices"] = outcome.stop_indices;
  Json calibration = Json::object();
  if (outcome.calibration_misalignment) {
    calibration["misalignment"] = *outcome.calibration_misalignment;
  }
  if (outcome.calibration_cost) calibration["cost"] = *outcome.calibration_cost;
  out["calibration"] = calibration;
  return out.dump(2) + "\n";
}

CalibrationResult ParseCalibrationReport(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("calibration report is not valid JSON: ") + e.what());
  }
  CalibrationResult result;
  try {
    const auto method = ParseMethod(Require(doc, "method").get<std::string>());
    if (!method) throw ValidationError("calibration report has an unknown method");
    result.method = *method;
    result.alpha = Require(doc, "alpha").get<double>();
    result.delta = Require(doc, "delta").get<double>();
    const Json& costs = Require(doc, "costs");
    result.costs = CostModel{Require(costs, "edge").get<double>(),
                             Require(costs, "cloud").get<double>(),
                             Require(costs, "human").get<double>(),
                             Require(costs, "call_multiplier").get<int>()};
    if (Require(doc, "policy").get<std::string>() == "fixed") {
      const auto tier = ParseTier(Require(doc, "fixed_tier").get<std::string>());
      if (!tier) throw ValidationError("calibration report has an unknown fixed tier");
      result.policy = Policy::Fixed(*tier);
    } else {
      const Json& selected = Require(doc, "selected");
      result.policy = Policy::FromThresholds(
          {Require(selected, "epsilon").get<double>(), Require(selected, "lambda").get<double>()});
    }
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("calibration report has a malformed field: ") + e.what());
  }
  return result;
}

CalibrationResult LoadCalibrationReport(const std::filesystem::path& path) {
  try {
    return ParseCalibrationReport(internal::ReadFile(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string EvaluationReportJson(const EvaluationReport& report) {
  Json out = Header();
  out["method"] = std::string(MethodName(report.result.method));
  out["alpha"] = report.result.alpha;
  out["delta"] = report.result.delta;
  out["costs"] = CostsJson(report.result.costs);
  out.update(PolicyFields(report.result.policy));
  out["data"] = report.data_path;
  out["test_size"] = report.test_size;
  out["test"] = Json{{"misalignment", report.test_misalignment},
                     {"cost", report.test_cost},
                     {"violated", report.test_misalignment > report.result.alpha}};
  if (report.true_misalignment && report.true_cost) {
    out["true"] = Json{{"misalignment", *report.true_misalignment},
                       {"cost", *report.true_cost},
                       {"violated", *report.true_misalignment > report.result.alpha}};
  }
  return out.dump(2) + "\n";
}

std::string SummaryJson(const McSummary& summary) {
  Json out = Header();
  out.update(SummaryBody(summary));
  return out.dump(2) + "\n";
}

std::string SweepCsv(SweepAxis axis, std::span<const SweepRow> rows) {
  static constexpr const char* kStats[] = {
      "violation_rate", "mean_misalignment", "std_misalignment", "mean_cost",
      "std_cost",       "quantile_misalignment", "iqr_max_misalignment", "iqr_max_cost",
      "fallback_rate",  "mean_calibration_cost"};
  std::string out = std::string(SweepAxisName(axis)) + ",trials";
  if (rows.empty()) return out + "\n";
  for (const auto& s : rows.front().summary.methods) {
    for (const char* stat : kStats) out += "," + std::string(MethodName(s.method)) + "." + stat;
  }
  out += "\n";
  for (const SweepRow& row : rows) {
    out += row.label + "," + std::to_string(row.summary.trials);
    for (const auto& s : row.summary.methods) {
      for (double v : {s.violation_rate, s.mean_misalignment, s.std_misalignment, s.mean_cost,
                       s.std_cost, s.quantile_misalignment, s.iqr_max_misalignment,
                       s.iqr_max_cost, s.fallback_rate, s.mean_calibration_cost}) {
        out += "," + Number(v);
      }
    }
    out += "\n";
  }
  return out;
}

std::string SweepJson(SweepAxis axis, std::span<const SweepRow> rows) {
  Json out = Header();
  out["axis"] = std::string(SweepAxisName(axis));
  Json points = Json::array();
  for (const SweepRow& row : rows) {
    Json point{{"value", row.label}};
    point.update(SummaryBody(row.summary));
    points.push_back(point);
  }
  out["points"] = points;
  return out.dump(2) + "\n";
}

void EmitReport(const std::filesystem::path& path, std::string_view contents) {
  internal::WriteFile(path, contents);
}

}  // namespace cascal
