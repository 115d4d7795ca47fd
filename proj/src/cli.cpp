#include "ensavg/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ensavg/csv.hpp"
#include "ensavg/errors.hpp"
#include "ensavg/evaluation.hpp"
#include "ensavg/json_io.hpp"
#include "ensavg/report.hpp"
#include "ensavg/selection.hpp"
#include "ensavg/weights.hpp"

namespace ensavg {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string output;
  std::string weights = "uniform";
  double tol_equal = kDefaultTolEqual;
  double tol_cos = kDefaultTolCos;
  double opt_tol = OptimizerSettings{}.tol;
  std::size_t opt_max_iter = OptimizerSettings{}.max_iter;
  std::optional<TimeIndex> calibration_end;
  std::string mode;
  std::optional<double> threshold;
  std::optional<std::size_t> k;
  double badness_floor = kDefaultBadnessFloor;
  std::size_t window = 0;
  std::size_t stride = 0;
};

ReportSettings report_settings(const Options& o) {
  ReportSettings s;
  s.tol_equal = o.tol_equal;
  s.tol_cos = o.tol_cos;
  s.opt_tol = o.opt_tol;
  s.opt_max_iter = o.opt_max_iter;
  s.weights_source = o.weights;
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Resolves --weights into a weight vector for `rs`.
WeightVector resolve_weights(const std::string& spec, const ResidualSet& rs,
                             const OptimizerSettings& opt) {
  if (spec == "uniform") return uniform_weights(rs.num_models());
  if (spec == "optimal") return optimal_weights(rs, opt).weights;
  if (!spec.empty() && spec.front() == '@') {
    const std::string path = spec.substr(1);
    WeightVector w = parse_weights_json(read_file(path));
    if (w.size() != rs.num_models()) {
      throw ValidationError("weights file '" + path + "' has " +
                            std::to_string(w.size()) + " entries for " +
                            std::to_string(rs.num_models()) + " models");
    }
    return w;
  }
  throw UsageError("--weights must be 'uniform', 'optimal' or '@file.json'");
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw Error("cannot open output file '" + o.output + "'");
  file << text;
  if (!file) throw Error("failed writing output file '" + o.output + "'");
}

void validate_tolerances(const Options& o) {
  if (!(o.tol_equal > 0.0 && o.tol_equal < 1.0)) {
    throw UsageError("--tol-equal must lie in (0, 1)");
  }
  if (!(o.tol_cos > 0.0 && o.tol_cos < 1.0)) {
    throw UsageError("--tol-cos must lie in (0, 1)");
  }
  if (!(o.opt_tol > 0.0) || !std::isfinite(o.opt_tol)) {
    throw UsageError("--opt-tol must be positive");
  }
  if (o.opt_max_iter < 1) throw UsageError("--opt-max-iter must be >= 1");
}

std::string run_diagnose(const Options& o, bool weights_given) {
  const EnsembleData data = read_ensemble_csv(o.input);
  ReportSettings settings = report_settings(o);
  if (o.calibration_end) {
    if (weights_given) {
      throw UsageError("--weights cannot be combined with --calibration-end");
    }
    const CalibrationResult result = calibrate_then_validate(
        data.obs, data.ensemble, *o.calibration_end, settings);
    return dump_json(calibration_to_json(result, data.ensemble.names()));
  }
  const ResidualSet rs = residuals(data.ensemble, data.obs);
  const WeightVector w = resolve_weights(o.weights, rs, settings.optimizer());
  return emit_report(diagnose(data.obs, data.ensemble, w, settings));
}

std::string run_optimize(const Options& o) {
  const EnsembleData data = read_ensemble_csv(o.input);
  const OptimizerSettings opt{o.opt_max_iter, o.opt_tol};
  const OptimizationOutcome outcome =
      optimal_weights(residuals(data.ensemble, data.obs), opt);
  return dump_json(outcome_to_json(outcome, data.ensemble.names(), opt));
}

std::string run_select(const Options& o) {
  Json j;
  std::vector<std::string> names;
  if (o.mode == "prescreen") {
    if (!o.threshold) throw UsageError("--mode prescreen requires --threshold");
    if (!(*o.threshold > 0.0) || !std::isfinite(*o.threshold)) {
      throw UsageError("--threshold must be a positive finite number");
    }
    const EnsembleData data = read_ensemble_csv(o.input);
    names = data.ensemble.names();
    const ResidualSet rs = residuals(data.ensemble, data.obs);
    j = selection_to_json(prescreen(rs, data.obs, *o.threshold), names);
    j["settings"] = {{"mode", o.mode}, {"threshold", *o.threshold}};
  } else if (o.mode == "anticorr") {
    if (!o.k) throw UsageError("--mode anticorr requires --k");
    const EnsembleData data = read_ensemble_csv(o.input);
    names = data.ensemble.names();
    const ResidualSet rs = residuals(data.ensemble, data.obs);
    j = selection_to_json(anti_correlated_subset(rs, *o.k), names);
    j["settings"] = {{"mode", o.mode}, {"k", *o.k}};
  } else if (o.mode == "equally-bad") {
    if (!(o.badness_floor > 0.0) || !std::isfinite(o.badness_floor)) {
      throw UsageError("--badness-floor must be a positive finite number");
    }
    const EnsembleData data = read_ensemble_csv(o.input);
    names = data.ensemble.names();
    const ResidualSet rs = residuals(data.ensemble, data.obs);
    j["schema_version"] = kSchemaVersion;
    j["criterion"] = "equally-bad";
    j["model_names"] = names;
    j["per_model_scores"] = model_scores(rs);
    j["ratios"] = screening_ratios(rs, data.obs);
    j["equally_bad"] =
        equally_bad_test(rs, data.obs, o.tol_equal, o.badness_floor);
    j["settings"] = {{"mode", o.mode},
                     {"tol_equal", o.tol_equal},
                     {"badness_floor", o.badness_floor}};
  } else {
    throw UsageError("--mode must be 'prescreen', 'anticorr' or 'equally-bad'");
  }
  return dump_json(j);
}

std::string run_sweep(const Options& o) {
  const EnsembleData data = read_ensemble_csv(o.input);
  const ResidualSet rs = residuals(data.ensemble, data.obs);
  const WeightVector w =
      resolve_weights(o.weights, rs, {o.opt_max_iter, o.opt_tol});
  const auto rows =
      sweep_best_model(data.obs, data.ensemble, o.window, o.stride, w);
  return dump_json(
      sweep_to_json(rows, data.ensemble.names(), w, o.window, o.stride));
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  Options o;
  CLI::App app{"Diagnose whether a weighted model average beats its best member"};
  app.name("ensavg");
  app.require_subcommand(1);

  const auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("--input,-i", o.input, "Ensemble CSV (t,Y,models...)")
        ->required();
    cmd->add_option("--output,-o", o.output, "Write JSON here, not stdout");
  };
  const auto add_opt = [&](CLI::App* cmd) {
    cmd->add_option("--opt-tol", o.opt_tol, "Optimizer relative tolerance")
        ->capture_default_str();
    cmd->add_option("--opt-max-iter", o.opt_max_iter, "Optimizer iterations")
        ->capture_default_str();
  };

  CLI::App* diagnose_cmd = app.add_subcommand("diagnose", "Full diagnostics report");
  add_input(diagnose_cmd);
  CLI::Option* weights_opt = diagnose_cmd->add_option(
      "--weights", o.weights, "uniform | optimal | @file.json");
  diagnose_cmd->add_option("--calibration-end", o.calibration_end,
                           "Fit weights on t <= N, validate on the rest");
  diagnose_cmd->add_option("--tol-equal", o.tol_equal)->capture_default_str();
  diagnose_cmd->add_option("--tol-cos", o.tol_cos)->capture_default_str();
  add_opt(diagnose_cmd);

  CLI::App* optimize_cmd = app.add_subcommand("optimize", "Optimal simplex weights");
  add_input(optimize_cmd);
  add_opt(optimize_cmd);

  CLI::App* select_cmd = app.add_subcommand("select", "Model selection");
  add_input(select_cmd);
  select_cmd->add_option("--mode", o.mode, "prescreen | anticorr | equally-bad")
      ->required();
  select_cmd->add_option("--threshold", o.threshold, "Screening ratio cutoff");
  select_cmd->add_option("--k", o.k, "Subset size for anticorr");
  select_cmd->add_option("--tol-equal", o.tol_equal)->capture_default_str();
  select_cmd->add_option("--badness-floor", o.badness_floor)
      ->capture_default_str();

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sliding-window best model");
  add_input(sweep_cmd);
  sweep_cmd->add_option("--window", o.window)->required();
  sweep_cmd->add_option("--stride", o.stride)->required();
  sweep_cmd->add_option(
      "--weights", o.weights, "uniform | optimal | @file.json");
  add_opt(sweep_cmd);

  std::vector<std::string> argv_storage{"ensavg"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ensavg: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    validate_tolerances(o);
    std::string text;
    if (*diagnose_cmd) {
      text = run_diagnose(o, weights_opt->count() > 0);
    } else if (*optimize_cmd) {
      text = run_optimize(o);
    } else if (*select_cmd) {
      text = run_select(o);
    } else if (*sweep_cmd) {
      text = run_sweep(o);
    }
    emit(text, o, out);
  } catch (const UsageError& e) {
    err << "ensavg: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "ensavg: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "ensavg: internal error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace ensavg
