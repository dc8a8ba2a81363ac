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

// cascal: risk-controlled threshold calibration for edge/cloud/human cascades.
//
// Exit codes: 0 success, 1 usage or validation error, 2 runtime or I/O error.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cascal/calibration.hpp"
#include "cascal/harness.hpp"
#include "cascal/records_io.hpp"
#include "cascal/report.hpp"
#include "cascal/risk.hpp"
#include "cascal/synthetic.hpp"

namespace {

using namespace cascal;

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kDefaultPromptCount = 10;

DiscreteScoreModel ResolveModel(const std::string& source) {
  if (source == "builtin:default") return DefaultModel();
  if (source == "builtin:boundary") return BoundaryModel();
  if (source.starts_with("builtin:")) {
    throw ValidationError("unknown built-in model \"" + source + "\"");
  }
  return LoadModel(source);
}

struct DataOptions {
  std::string path;
  std::string format;  // empty: from extension
  std::string schema = "aggregated";

  void Register(CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--data", path, "Score records (JSONL or CSV)");
    if (required) opt->required();
    cmd->add_option("--format", format, "Record format: jsonl or csv (default: by extension)");
    cmd->add_option("--schema", schema,
                    "Record schema: aggregated, raw-white-box or raw-black-box");
  }

  std::vector<CascadeRecord> Load() const {
    RecordFormat fmt = FormatFromPath(path);
    if (!format.empty()) {
      const auto parsed = ParseRecordFormat(format);
      if (!parsed) throw ValidationError("unknown record format \"" + format + "\"");
      fmt = *parsed;
    }
    const auto sch = ParseRecordSchema(schema);
    if (!sch) throw ValidationError("unknown record schema \"" + schema + "\"");
    std::vector<CascadeRecord> records = ParseRecords(path, fmt, *sch);
    if (records.empty()) throw ValidationError(path + ": no records");
    return records;
  }
};

// Experiment settings shared by calibrate, montecarlo and sweep.
struct SettingsOptions {
  double alpha = 0.3;
  double delta = 0.05;
  std::string grid = "5x100";
  std::string costs = "1.5,7,10";
  std::string mode = "white";
  int calls = 0;

  void Register(CLI::App* cmd, bool required) {
    auto* a = cmd->add_option("--alpha", alpha, "Misalignment upper bound");
    auto* d = cmd->add_option("--delta", delta, "Tolerance level (1 - reliability)");
    auto* g = cmd->add_option("--grid", grid, "Threshold grid MxQ");
    auto* c = cmd->add_option("--costs", costs, "Tier costs edge,cloud,human");
    auto* m = cmd->add_option("--mode", mode, "Scoring mode: white (1 call) or black (K calls)")
                  ->check(CLI::IsMember({"white", "black"}));
    if (required) {
      for (auto* opt : {a, d, g, c, m}) opt->required();
    }
    cmd->add_option("--calls", calls, "Model calls per query charged at edge and cloud");
  }

  CostModel Costs() const {
    CostModel out = ParseCostSpec(costs);
    out.call_multiplier = calls > 0 ? calls : (mode == "black" ? kDefaultPromptCount : 1);
    if (calls < 0) throw ValidationError("--calls must be positive");
    const std::string warning = ValidateCosts(out);
    if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
    return out;
  }
};

struct ExperimentOptions {
  SettingsOptions settings;
  std::size_t n = 100;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  int workers = 1;
  std::vector<std::string> methods;
  std::size_t test_size = 1000;

  void Register(CLI::App* cmd, bool required) {
    settings.Register(cmd, false);
    auto* nn = cmd->add_option("--n", n, "Calibration set size");
    auto* t = cmd->add_option("--trials", trials, "Monte Carlo trials");
    auto* s = cmd->add_option("--seed", seed, "Base seed; trial i uses seed + i");
    if (required) {
      for (auto* opt : {nn, t, s}) opt->required();
    }
    cmd->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--methods", methods, "Methods to run (default: all)")->delimiter(',');
    cmd->add_option("--test-size", test_size, "Held-out split size when --data is used");
  }

  ExperimentConfig Config() const {
    ExperimentConfig config;
    if (!methods.empty()) {
      config.methods.clear();
      for (const auto& name : methods) {
        const auto m = ParseMethod(name);
        if (!m) throw ValidationError("unknown method \"" + name + "\"");
        config.methods.push_back(*m);
      }
    }
    config.n = n;
    config.alpha = settings.alpha;
    config.delta = settings.delta;
    const auto [m, q] = ParseGridSpec(settings.grid);
    config.m_count = m;
    config.q_count = q;
    config.costs = settings.Costs();
    config.test_size = test_size;
    ValidateConfig(config);
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-controlled threshold calibration for edge-cloud-human cascades"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // synth
  std::string synth_model, synth_out, synth_format;
  std::size_t synth_n = 0;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "Sample score records from a synthetic model");
  synth->add_option("--model", synth_model, "Model JSON, or builtin:default / builtin:boundary")
      ->required();
  synth->add_option("--n", synth_n, "Number of records")->required();
  synth->add_option("--seed", synth_seed, "Sampling seed")->required();
  synth->add_option("--out", synth_out, "Output record file")->required();
  synth->add_option("--format", synth_format, "jsonl or csv (default: by extension)");

  // default-model
  std::string dm_name = "default", dm_out;
  auto* default_model = app.add_subcommand("default-model", "Write a built-in synthetic model");
  default_model->add_option("--name", dm_name, "default or boundary")
      ->check(CLI::IsMember({"default", "boundary"}));
  default_model->add_option("--out", dm_out, "Output JSON file")->required();

  // calibrate
  DataOptions cal_data;
  SettingsOptions cal_settings;
  std::string cal_method, cal_out;
  auto* calibrate = app.add_subcommand("calibrate", "Select routing thresholds on a dataset");
  cal_data.Register(calibrate, true);
  calibrate->add_option("--method", cal_method, "mht-erm, mht-erm-b, c-erm or a *-only baseline")
      ->required();
  cal_settings.Register(calibrate, true);
  calibrate->add_option("--out", cal_out, "Output report (JSON)")->required();

  // evaluate
  DataOptions eval_data;
  std::string eval_result, eval_model, eval_out;
  auto* evaluate = app.add_subcommand("evaluate", "Score a calibrated policy on held-out data");
  evaluate->add_option("--result", eval_result, "Report written by calibrate")->required();
  eval_data.Register(evaluate, true);
  evaluate->add_option("--model", eval_model, "Synthetic model for exact risks");
  evaluate->add_option("--out", eval_out, "Output report (JSON)")->required();

  // montecarlo
  ExperimentOptions mc;
  DataOptions mc_data;
  std::string mc_model, mc_out;
  auto* montecarlo = app.add_subcommand("montecarlo", "Monte Carlo check of the FWER guarantee");
  auto* mc_model_opt =
      montecarlo->add_option("--model", mc_model, "Model JSON or builtin:default");
  mc.Register(montecarlo, true);
  mc_data.Register(montecarlo, false);
  montecarlo->add_option("--out", mc_out, "Output summary (JSON)")->required();
  mc_model_opt->excludes(montecarlo->get_option("--data"));

  // sweep
  ExperimentOptions sw;
  std::string sw_axis, sw_model, sw_out;
  std::vector<std::string> sw_values;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo summaries along one parameter axis");
  sweep->add_option("--axis", sw_axis, "n, alpha, grid or costs")
      ->required()
      ->check(CLI::IsMember({"n", "alpha", "grid", "costs"}));
  sweep->add_option("--values", sw_values,
                    "Values separated by ';' (or ',' for n, alpha, grid); costs as e:c:h[@acc]")
      ->required()
      ->delimiter(';');
  sweep->add_option("--model", sw_model, "Model JSON or builtin:default")->required();
  sw.Register(sweep, false);
  sweep->add_option("--out", sw_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth) {
      const DiscreteScoreModel model = ResolveModel(synth_model);
      RecordFormat fmt = FormatFromPath(synth_out);
      if (!synth_format.empty()) {
        const auto parsed = ParseRecordFormat(synth_format);
        if (!parsed) throw ValidationError("unknown record format \"" + synth_format + "\"");
        fmt = *parsed;
      }
      WriteRecords(synth_out, SampleDataset(model, synth_n, synth_seed), fmt);
    } else if (*default_model) {
      SaveModel(dm_name == "boundary" ? BoundaryModel() : DefaultModel(), dm_out);
    } else if (*calibrate) {
      const auto method = ParseMethod(cal_method);
      if (!method) throw ValidationError("unknown method \"" + cal_method + "\"");
      if (!(cal_settings.alpha > 0.0 && cal_settings.alpha < 1.0)) {
        throw ValidationError("alpha must lie in (0, 1)");
      }
      if (!(cal_settings.delta > 0.0 && cal_settings.delta < 1.0)) {
        throw ValidationError("delta must lie in (0, 1)");
      }
      const auto [m, q] = ParseGridSpec(cal_settings.grid);
      const ThresholdGrid grid(m, q);
      const CostModel costs = cal_settings.Costs();
      const std::vector<CascadeRecord> data = cal_data.Load();
      CalibrationOutcome outcome =
          Calibrate(*method, data, grid, cal_settings.alpha, cal_settings.delta, costs);
      outcome.delta = cal_settings.delta;
      const CalibrationReportContext context{grid, costs, cal_settings.mode, cal_data.path,
                                             data.size()};
      EmitReport(cal_out, CalibrationReportJson(outcome, context));
    } else if (*evaluate) {
      EvaluationReport report;
      report.result = LoadCalibrationReport(eval_result);
      const std::vector<CascadeRecord> data = eval_data.Load();
      const TierCounts counts = Tally(data, report.result.policy);
      report.data_path = eval_data.path;
      report.test_size = data.size();
      report.test_misalignment = MeanMisalignment(counts);
      report.test_cost = MeanCost(counts, report.result.costs);
      if (!eval_model.empty()) {
        const DiscreteScoreModel model = ResolveModel(eval_model);
        report.true_misalignment = TrueMisalignment(model, report.result.policy);
        report.true_cost = TrueCost(model, report.result.policy, report.result.costs);
      }
      EmitReport(eval_out, EvaluationReportJson(report));
    } else if (*montecarlo) {
      const ExperimentConfig config = mc.Config();
      McSummary summary;
      if (!mc_model.empty()) {
        summary = RunMonteCarlo(ResolveModel(mc_model), config, mc.trials, mc.seed, mc.workers);
      } else if (!mc_data.path.empty()) {
        summary = RunMonteCarloOnData(mc_data.Load(), config, mc.trials, mc.seed, mc.workers);
      } else {
        throw ValidationError("montecarlo needs --model or --data");
      }
      EmitReport(mc_out, SummaryJson(summary));
    } else if (*sweep) {
      const SweepAxis axis = *ParseSweepAxis(sw_axis);
      std::vector<std::string> values;
      for (const std::string& chunk : sw_values) {
        // Scalar axes also accept comma lists; cost triples keep their commas.
        if (axis == SweepAxis::kCostProfile) {
          values.push_back(chunk);
          continue;
        }
        std::size_t start = 0;
        while (start <= chunk.size()) {
          const std::size_t comma = std::min(chunk.find(',', start), chunk.size());
          values.push_back(chunk.substr(start, comma - start));
          start = comma + 1;
        }
      }
      const std::vector<SweepPoint> points =
          MakeSweepPoints(axis, values, ResolveModel(sw_model), sw.Config());
      const std::vector<SweepRow> rows = RunSweep(points, sw.trials, sw.seed, sw.workers);
      std::error_code ec;
      std::filesystem::create_directories(sw_out, ec);
      if (ec) throw IoError("cannot create directory " + sw_out + ": " + ec.message());
      const std::filesystem::path dir(sw_out);
      const std::string stem = "sweep_" + std::string(SweepAxisName(axis));
      EmitReport(dir / (stem + ".csv"), SweepCsv(axis, rows));
      EmitReport(dir / (stem + ".json"), SweepJson(axis, rows));
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
