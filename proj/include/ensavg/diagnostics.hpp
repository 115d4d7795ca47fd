#ifndef ENSAVG_DIAGNOSTICS_HPP
#define ENSAVG_DIAGNOSTICS_HPP

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "ensavg/core_metrics.hpp"

namespace ensavg {

// Unordered model pair, stored with first < second (0-based indices).
using ModelPair = std::pair<std::size_t, std::size_t>;

// Outcome of testing one of the best-member-versus-average results.
// Hypothesis and conclusion are evaluated independently; neither is inferred
// from the other.
struct ResultVerdict {
  bool hypothesis_holds = false;
  bool conclusion_holds = false;
  std::vector<ModelPair> witnesses;
  double s_min_sq = 0.0;
  double s_sq = 0.0;
  std::size_t best_model_index = 0;

  bool operator==(const ResultVerdict&) const = default;
};

struct SchwarzBounds {
  double lower = 0.0;
  double upper = 0.0;
  double actual = 0.0;
  bool upper_tight = false;

  bool operator==(const SchwarzBounds&) const = default;
};

enum class Regime {
  kEquallyGoodLowCorrespondence,
  kDominantBestPositiveCorrespondence,
  kNeither,
};

std::string_view regime_name(Regime regime);
Regime regime_from_name(std::string_view name);

inline constexpr double kDefaultTolEqual = 0.05;
inline constexpr double kDefaultTolCos = 0.1;

// Index of the lowest score; ties go to the lowest index.
std::size_t best_model(std::span<const double> scores);

// Best member loses to the average whenever every off-diagonal
// correspondence strictly exceeds S_min^2. Witnesses are the pairs with
// R_{m,m'} <= S_min^2. Throws NeedsTwoModelsError for M < 2.
ResultVerdict check_result1(const ResidualSet& rs, const WeightVector& w);

// The same hypothesis phrased through angles: cos(theta_{m,m'}) >
// S_min^2 / (S_m S_{m'}). Computed from cosine_matrix, not from result 1.
ResultVerdict check_result2(const ResidualSet& rs, const WeightVector& w);

// If the average beats the best member, some pair has
// cos(theta_{m,m'}) < S_min^2 / (S_m S_{m'}). Witnesses are all such pairs.
ResultVerdict check_result3(const ResidualSet& rs, const WeightVector& w);

// 0 <= S^2 <= (sum_m w_m S_m)^2. The upper bound is flagged tight when all
// nonzero residuals are pairwise collinear (cosine 1 within 1e-9).
SchwarzBounds schwartz_bounds(const ResidualSet& rs, const WeightVector& w);

Regime classify_regime(const ResidualSet& rs,
                       double tol_equal = kDefaultTolEqual,
                       double tol_cos = kDefaultTolCos);

}  // namespace ensavg

#endif  // ENSAVG_DIAGNOSTICS_HPP
