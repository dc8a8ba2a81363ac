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

#ifndef CASCAL_REPORT_HPP_
#define CASCAL_REPORT_HPP_

// JSON and CSV reports. Field order is fixed and numbers use the shortest
// round-trip representation, so identical inputs give byte-identical files.
// No timestamps or host data are written.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "cascal/calibration.hpp"
#include "cascal/harness.hpp"

namespace cascal {

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

struct CalibrationReportContext {
  ThresholdGrid grid{2, 2};
  CostModel costs;
  std::string mode;  // "white" or "black"
  std::string data_path;
  std::size_t n = 0;
};

std::string CalibrationReportJson(const CalibrationOutcome& outcome,
                                  const CalibrationReportContext& context);

// What `evaluate` needs back from a calibration report.
struct CalibrationResult {
  Method method = Method::kHumanOnly;
  Policy policy = Policy::FromThresholds(kHumanFallback);
  CostModel costs;
  double alpha = 0.0;
  double delta = 0.0;
};
CalibrationResult ParseCalibrationReport(std::string_view text);
CalibrationResult LoadCalibrationReport(const std::filesystem::path& path);

struct EvaluationReport {
  CalibrationResult result;
  std::string data_path;
  std::size_t test_size = 0;
  double test_misalignment = 0.0;
  double test_cost = 0.0;
  std::optional<double> true_misalignment;
  std::optional<double> true_cost;
};
std::string EvaluationReportJson(const EvaluationReport& report);

std::string SummaryJson(const McSummary& summary);

// Header row, then one row per sweep value with a column per (method, stat).
std::string SweepCsv(SweepAxis axis, std::span<const SweepRow> rows);
std::string SweepJson(SweepAxis axis, std::span<const SweepRow> rows);

// Writes `contents` to `path`; IoError with the path on failure.
void EmitReport(const std::filesystem::path& path, std::string_view contents);

}  // namespace cascal

#endif  // CASCAL_REPORT_HPP_
