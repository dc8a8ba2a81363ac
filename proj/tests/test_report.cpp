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

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cascal/report.hpp"

using namespace cascal;
using Json = nlohmann::json;

namespace {

std::size_t CountLines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("calibration report carries the selection") {
  const auto data = SampleDataset(DefaultModel(), 100, 1);
  const ThresholdGrid grid(5, 100);
  const CostModel costs{1.5, 7, 10, 1};
  const CalibrationOutcome out = MhtErm(data, grid, 0.3, 0.05, costs);
  const std::string text =
      CalibrationReportJson(out, {grid, costs, "white", "data.jsonl", data.size()});
  const Json doc = Json::parse(text);
  CHECK(doc["method"] == "mht-erm");
  CHECK(doc["fallback_used"] == false);
  CHECK(doc["selected"]["epsilon"].get<double>() == out.selected()->epsilon);
  CHECK(doc["selected"]["lambda"].get<double>() == out.selected()->lambda);
  CHECK(doc["certified_count"] == out.certified_set.size());
  CHECK(doc["stop_indices"].size() == 5);
  CHECK(doc["grid"]["q"] == 100);
  CHECK(doc["version"] == std::string(kToolVersion));
  // Emitting again gives the same bytes.
  CHECK(text == CalibrationReportJson(out, {grid, costs, "white", "data.jsonl", data.size()}));

  const CalibrationResult back = ParseCalibrationReport(text);
  CHECK(back.policy == out.policy);
  CHECK(back.costs == costs);
  CHECK(back.method == Method::kMhtErm);
}

TEST_CASE("fixed-policy reports round trip") {
  CalibrationOutcome out = FixedPolicy(Tier::kCloud);
  out.alpha = 0.3;
  const std::string text = CalibrationReportJson(out, {ThresholdGrid(2, 2), {1, 2, 3, 1}, "white", "", 0});
  const Json doc = Json::parse(text);
  CHECK(doc["policy"] == "fixed");
  CHECK(doc["fixed_tier"] == "cloud");
  CHECK(doc["selected"].is_null());
  CHECK(ParseCalibrationReport(text).policy == Policy::Fixed(Tier::kCloud));
  CHECK_THROWS_AS(ParseCalibrationReport("{\"method\": \"mht-erm\"}"), ValidationError);
  CHECK_THROWS_AS(ParseCalibrationReport("nope"), ValidationError);
}

TEST_CASE("sweep CSV has one row per value plus a header") {
  ExperimentConfig config;
  config.n = 30;
  config.m_count = 3;
  config.q_count = 10;
  config.methods = {Method::kMhtErm, Method::kHumanOnly};
  const std::vector<std::string> values{"0.1", "0.2", "0.3", "0.4", "0.5"};
  const auto rows =
      RunSweep(MakeSweepPoints(SweepAxis::kAlpha, values, DefaultModel(), config), 3, 7);
  const std::string csv = SweepCsv(SweepAxis::kAlpha, rows);
  CHECK(CountLines(csv) == 6);
  CHECK(csv.rfind("alpha,trials,mht-erm.violation_rate,", 0) == 0);
  CHECK(csv == SweepCsv(SweepAxis::kAlpha, rows));
  const Json doc = Json::parse(SweepJson(SweepAxis::kAlpha, rows));
  CHECK(doc["points"].size() == 5);
  CHECK(doc["points"][2]["value"] == "0.3");
}

TEST_CASE("summary JSON and emission") {
  ExperimentConfig config;
  config.n = 30;
  config.m_count = 3;
  config.q_count = 10;
  const McSummary s = RunMonteCarlo(DefaultModel(), config, 4, 11);
  const Json doc = Json::parse(SummaryJson(s));
  CHECK(doc["trials"] == 4);
  CHECK(doc["base_seed"] == 11);
  CHECK(doc["generator"] == std::string(kGeneratorName));
  CHECK(doc["methods"].size() == config.methods.size());

  const auto path = std::filesystem::temp_directory_path() / "cascal_report_test.json";
  EmitReport(path, SummaryJson(s));
  CHECK(std::filesystem::file_size(path) == SummaryJson(s).size());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(EmitReport("/nonexistent/dir/x.json", "{}"), IoError);
}
