#include "ensavg/report.hpp"

#include "ensavg/errors.hpp"

namespace ensavg {

DiagnosticsReport diagnose(const ObservationSeries& obs,
                           const ModelEnsemble& ensemble,
                           const WeightVector& weights,
                           const ReportSettings& settings) {
  const ResidualSet rs = residuals(ensemble, obs);
  if (weights.size() != rs.num_models()) {
    throw ValidationError("got " + std::to_string(weights.size()) +
                          " weights for " + std::to_string(rs.num_models()) +
                          " models");
  }

  DiagnosticsReport report;
  report.interval = {obs.start(), obs.end(), obs.size()};
  report.model_names = ensemble.names();
  report.weights_used = weights.values();
  report.settings = settings;

  const CorrespondenceMatrix r = correspondence_matrix(rs);
  report.correspondence = r.rows();
  for (std::size_t m = 0; m < r.size(); ++m) {
    report.per_model_scores.push_back(r(m, m));
    if (r(m, m) == 0.0) report.perfect_models.push_back(rs.name(m));
  }
  const bool has_perfect = !report.perfect_models.empty();
  if (!has_perfect) report.cosines = cosine_matrix(rs).rows();

  report.ensemble_score = ensemble_score(rs, weights);
  const std::size_t best = best_model(report.per_model_scores);
  report.best = {best, rs.name(best), report.per_model_scores[best]};

  if (rs.num_models() >= 2) {
    report.result1 = check_result1(rs, weights);
    if (!has_perfect) {
      report.result2 = check_result2(rs, weights);
      report.result3 = check_result3(rs, weights);
      report.regime = classify_regime(rs, settings.tol_equal, settings.tol_cos);
    }
  }
  report.bounds = schwartz_bounds(rs, weights);
  return report;
}

}  // namespace ensavg
