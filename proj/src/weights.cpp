#include "ensavg/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ensavg/diagnostics.hpp"
#include "ensavg/errors.hpp"

namespace ensavg {

namespace {

constexpr std::size_t kPowerIterations = 200;

// Largest eigenvalue of a symmetric PSD matrix by power iteration. Returns
// the Rayleigh quotient of the final iterate.
double largest_eigenvalue(const SquareMatrix& g) {
  const std::size_t n = g.size();
  Vector x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  // A fixed asymmetric tilt avoids starting orthogonal to the top eigenvector.
  for (std::size_t i = 0; i < n; ++i) x[i] += 1e-3 * static_cast<double>(i + 1);
  double lambda = 0.0;
  for (std::size_t k = 0; k < kPowerIterations; ++k) {
    Vector y = g.multiply(x);
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (double& v : y) v /= norm;
    x = std::move(y);
    lambda = g.quadratic_form(x);
  }
  return lambda;
}

std::vector<std::size_t> support_of(const WeightVector& w) {
  std::vector<std::size_t> support;
  for (std::size_t m = 0; m < w.size(); ++m) {
    if (w[m] > kActiveWeightThreshold) support.push_back(m);
  }
  return support;
}

OptimizationOutcome make_outcome(const ResidualSet& rs, Vector weights,
                                 std::size_t iterations, bool converged) {
  WeightVector w(std::move(weights));
  const double score = ensemble_score(rs, w);
  auto support = support_of(w);
  return OptimizationOutcome{std::move(w), score, iterations, converged,
                             std::move(support)};
}

}  // namespace

WeightVector uniform_weights(std::size_t num_models) {
  if (num_models == 0) throw ValidationError("cannot weight zero models");
  return WeightVector(
      Vector(num_models, 1.0 / static_cast<double>(num_models)));
}

SquareMatrix gram_matrix(const ResidualSet& rs) {
  return correspondence_matrix(rs);
}

Vector project_to_simplex(std::span<const double> point) {
  const std::size_t n = point.size();
  if (n == 0) throw ValidationError("cannot project an empty vector");
  Vector sorted(point.begin(), point.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  Vector out(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::max(point[i] - theta, 0.0);
    sum += out[i];
  }
  // Remove the last few ulps of drift so the sum is 1 to rounding.
  for (double& v : out) v /= sum;
  return out;
}

OptimizationOutcome optimal_weights(const ResidualSet& rs,
                                    const OptimizerSettings& settings) {
  if (settings.max_iter < 1) throw ValidationError("max_iter must be >= 1");
  if (!(settings.tol > 0.0)) throw ValidationError("tol must be positive");

  const std::size_t m_count = rs.num_models();
  const SquareMatrix g = gram_matrix(rs);

  for (std::size_t m = 0; m < m_count; ++m) {
    if (g(m, m) == 0.0) {
      return make_outcome(rs, WeightVector::indicator(m_count, m).values(), 0,
                          true);
    }
  }
  if (m_count == 1) return make_outcome(rs, {1.0}, 0, true);

  const double lambda = largest_eigenvalue(g);
  double step = lambda > 0.0 ? 1.0 / (2.0 * lambda) : 1.0;

  Vector w = uniform_weights(m_count).values();
  double score = g.quadratic_form(w);
  std::size_t iterations = 0;
  bool converged = false;
  while (iterations < settings.max_iter) {
    ++iterations;
    const Vector grad = g.multiply(w);
    Vector trial(m_count);
    double trial_score = 0.0;
    // Backtrack if the power-iteration estimate undershoots lambda_max.
    for (int halvings = 0;; ++halvings) {
      for (std::size_t m = 0; m < m_count; ++m) {
        trial[m] = w[m] - step * 2.0 * grad[m];
      }
      trial = project_to_simplex(trial);
      trial_score = g.quadratic_form(trial);
      if (trial_score <= score || halvings >= 60) break;
      step *= 0.5;
    }
    const double change = std::abs(score - trial_score);
    w = std::move(trial);
    const double previous = score;
    score = trial_score;
    if (change <= settings.tol * std::abs(previous)) {
      converged = true;
      break;
    }
  }

  OptimizationOutcome outcome = make_outcome(rs, std::move(w), iterations,
                                             converged);

  // Vertices are feasible, so the best member bounds the optimum from above.
  const Vector scores = model_scores(rs);
  const std::size_t best = best_model(scores);
  if (scores[best] < outcome.score) {
    OptimizationOutcome vertex = make_outcome(
        rs, WeightVector::indicator(m_count, best).values(), iterations,
        converged);
    return vertex;
  }
  return outcome;
}

}  // namespace ensavg
