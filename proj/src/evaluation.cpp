#include "ensavg/evaluation.hpp"

#include "ensavg/diagnostics.hpp"
#include "ensavg/errors.hpp"

namespace ensavg {

IntervalSplit split_interval(const ObservationSeries& obs,
                             const ModelEnsemble& ensemble,
                             TimeIndex boundary) {
  if (ensemble.num_points() != obs.size()) {
    throw AlignmentError("ensemble and observations differ in length");
  }
  if (boundary < obs.start() || boundary >= obs.end()) {
    throw ValidationError("calibration boundary " + std::to_string(boundary) +
                          " must satisfy " + std::to_string(obs.start()) +
                          " <= boundary < " + std::to_string(obs.end()));
  }
  const auto n_cal = static_cast<std::size_t>(boundary - obs.start()) + 1;
  const std::size_t n_val = obs.size() - n_cal;
  return IntervalSplit{
      {obs.slice(0, n_cal), ensemble.slice(0, n_cal)},
      {obs.slice(n_cal, n_val), ensemble.slice(n_cal, n_val)},
  };
}

std::vector<SweepRow> sweep_best_model(const ObservationSeries& obs,
                                       const ModelEnsemble& ensemble,
                                       std::size_t window, std::size_t stride,
                                       const WeightVector& weights) {
  const ResidualSet rs = residuals(ensemble, obs);
  if (window < 1 || window > obs.size()) {
    throw ValidationError("window " + std::to_string(window) +
                          " must lie in [1, " + std::to_string(obs.size()) +
                          "]");
  }
  if (stride < 1) throw ValidationError("stride must be >= 1");
  if (weights.size() != rs.num_models()) {
    throw ValidationError("weight vector does not match model count");
  }

  std::vector<SweepRow> rows;
  for (std::size_t offset = 0; offset + window <= obs.size();
       offset += stride) {
    const ResidualSet part = rs.slice(offset, window);
    SweepRow row;
    row.window_start = obs.times()[offset];
    row.window_end = obs.times()[offset + window - 1];
    row.model_scores = model_scores(part);
    row.best_model_index = best_model(row.model_scores);
    row.s_min_sq = row.model_scores[row.best_model_index];
    row.s_sq = ensemble_score(part, weights);
    row.average_wins = row.s_sq < row.s_min_sq;
    rows.push_back(std::move(row));
  }
  return rows;
}

CalibrationResult calibrate_then_validate(const ObservationSeries& obs,
                                          const ModelEnsemble& ensemble,
                                          TimeIndex boundary,
                                          ReportSettings settings) {
  IntervalSplit split = split_interval(obs, ensemble, boundary);
  const ResidualSet cal =
      residuals(split.calibration.ensemble, split.calibration.obs);
  OptimizationOutcome outcome = optimal_weights(cal, settings.optimizer());
  settings.weights_source = "calibrated";
  settings.calibration_end = boundary;
  DiagnosticsReport validation =
      diagnose(split.validation.obs, split.validation.ensemble,
               outcome.weights, settings);
  WeightVector w = outcome.weights;
  return CalibrationResult{boundary, std::move(outcome), std::move(w),
                           std::move(validation)};
}

}  // namespace ensavg
