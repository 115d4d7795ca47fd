#ifndef ENSAVG_REPORT_HPP
#define ENSAVG_REPORT_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ensavg/core_metrics.hpp"
#include "ensavg/diagnostics.hpp"
#include "ensavg/weights.hpp"

namespace ensavg {

// Every knob that influenced a report, so the run can be replayed.
struct ReportSettings {
  double tol_equal = kDefaultTolEqual;
  double tol_cos = kDefaultTolCos;
  double opt_tol = OptimizerSettings{}.tol;
  std::size_t opt_max_iter = OptimizerSettings{}.max_iter;
  // "uniform", "optimal", "file:<path>" or "calibrated".
  std::string weights_source = "uniform";
  std::optional<TimeIndex> calibration_end;

  OptimizerSettings optimizer() const { return {opt_max_iter, opt_tol}; }

  bool operator==(const ReportSettings&) const = default;
};

struct IntervalInfo {
  TimeIndex start = 0;
  TimeIndex end = 0;
  std::size_t n_points = 0;

  bool operator==(const IntervalInfo&) const = default;
};

struct BestMember {
  std::size_t index = 0;
  std::string name;
  double s_min_sq = 0.0;

  bool operator==(const BestMember&) const = default;
};

struct DiagnosticsReport {
  IntervalInfo interval;
  std::vector<std::string> model_names;
  Vector weights_used;
  Vector per_model_scores;
  std::vector<Vector> correspondence;
  // Null when some member has zero residual; those members are listed in
  // perfect_models.
  std::optional<std::vector<Vector>> cosines;
  std::vector<std::string> perfect_models;
  double ensemble_score = 0.0;
  BestMember best;
  // Result verdicts need two models; results 2 and 3 also need every
  // S_m > 0. Absent otherwise.
  std::optional<ResultVerdict> result1;
  std::optional<ResultVerdict> result2;
  std::optional<ResultVerdict> result3;
  SchwarzBounds bounds;
  std::optional<Regime> regime;
  ReportSettings settings;

  bool operator==(const DiagnosticsReport&) const = default;
};

DiagnosticsReport diagnose(const ObservationSeries& obs,
                           const ModelEnsemble& ensemble,
                           const WeightVector& weights,
                           const ReportSettings& settings);

}  // namespace ensavg

#endif  // ENSAVG_REPORT_HPP
