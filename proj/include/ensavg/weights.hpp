#ifndef ENSAVG_WEIGHTS_HPP
#define ENSAVG_WEIGHTS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "ensavg/core_metrics.hpp"

namespace ensavg {

struct OptimizerSettings {
  std::size_t max_iter = 10000;
  double tol = 1e-12;
};

struct OptimizationOutcome {
  WeightVector weights;
  double score = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  // Models with weight > 1e-10.
  std::vector<std::size_t> active_support;
};

inline constexpr double kActiveWeightThreshold = 1e-10;

WeightVector uniform_weights(std::size_t num_models);

// The matrix of the quadratic form S^2 = w^T G w. Same entries as the
// correspondence matrix: the diagonal carries sum_m w_m^2 S_m^2 and the
// off-diagonal the cross sum.
SquareMatrix gram_matrix(const ResidualSet& rs);

// Euclidean projection of an arbitrary point onto the probability simplex.
Vector project_to_simplex(std::span<const double> point);

// Minimizes w^T G w over the simplex by projected gradient, starting from
// uniform weights with step 1/(2 lambda_max). The result never scores worse
// than the uniform start or the best single member, converged or not.
OptimizationOutcome optimal_weights(const ResidualSet& rs,
                                    const OptimizerSettings& settings = {});

}  // namespace ensavg

#endif  // ENSAVG_WEIGHTS_HPP
