#ifndef ENSAVG_EVALUATION_HPP
#define ENSAVG_EVALUATION_HPP

#include <cstddef>
#include <vector>

#include "ensavg/core_metrics.hpp"
#include "ensavg/report.hpp"
#include "ensavg/weights.hpp"

namespace ensavg {

struct IntervalPart {
  ObservationSeries obs;
  ModelEnsemble ensemble;
};

// Calibration holds times up to and including the boundary; validation holds
// the rest. Both parts are non-empty.
struct IntervalSplit {
  IntervalPart calibration;
  IntervalPart validation;
};

struct SweepRow {
  TimeIndex window_start = 0;
  TimeIndex window_end = 0;  // inclusive
  std::size_t best_model_index = 0;
  double s_min_sq = 0.0;
  double s_sq = 0.0;
  bool average_wins = false;
  // Per-model S_m^2 on the window.
  Vector model_scores;

  bool operator==(const SweepRow&) const = default;
};

struct CalibrationResult {
  TimeIndex boundary = 0;
  OptimizationOutcome calibration;
  WeightVector calibration_weights;
  DiagnosticsReport validation_report;
};

IntervalSplit split_interval(const ObservationSeries& obs,
                             const ModelEnsemble& ensemble,
                             TimeIndex boundary);

// Slides a window of `window` points by `stride`; a trailing partial window
// is dropped.
std::vector<SweepRow> sweep_best_model(const ObservationSeries& obs,
                                       const ModelEnsemble& ensemble,
                                       std::size_t window, std::size_t stride,
                                       const WeightVector& weights);

// Fits optimal weights on the calibration part and scores the validation
// part with those weights frozen.
CalibrationResult calibrate_then_validate(const ObservationSeries& obs,
                                          const ModelEnsemble& ensemble,
                                          TimeIndex boundary,
                                          ReportSettings settings = {});

}  // namespace ensavg

#endif  // ENSAVG_EVALUATION_HPP
