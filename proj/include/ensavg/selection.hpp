#ifndef ENSAVG_SELECTION_HPP
#define ENSAVG_SELECTION_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ensavg/core_metrics.hpp"

namespace ensavg {

struct DroppedModel {
  std::size_t index = 0;
  // Screening ratio S_m^2 / mean(Y^2); absent for rules that do not use it.
  std::optional<double> ratio;

  bool operator==(const DroppedModel&) const = default;
};

struct SelectionReport {
  std::vector<std::size_t> kept;  // input order
  std::vector<DroppedModel> dropped;
  std::string criterion;
  // Screening ratios for every model (prescreen only).
  std::vector<double> ratios;
  // Cross-term sum achieved by the chosen subset (anti-correlation only).
  std::optional<double> objective_value;

  bool operator==(const SelectionReport&) const = default;
};

inline constexpr double kDefaultBadnessFloor = 10.0;
// Above this many k-subsets the anti-correlation search switches to greedy.
inline constexpr std::size_t kExhaustiveLimit = 10000;

// S_m^2 / ((1/T) sum_t Y_t^2) for every model.
std::vector<double> screening_ratios(const ResidualSet& rs,
                                     const ObservationSeries& obs);

// Keeps model m iff its screening ratio is <= threshold.
SelectionReport prescreen(const ResidualSet& rs, const ObservationSeries& obs,
                          double threshold);

// All members about equally good (max/min score - 1 <= tol_equal) and all
// bad relative to the observations (min screening ratio >= badness_floor).
bool equally_bad_test(const ResidualSet& rs, const ObservationSeries& obs,
                      double tol_equal, double badness_floor);

// sum_{m != m'} w_m w_m' R_{m,m'} over ordered pairs of `subset`, with
// uniform weights 1/k on the subset.
double cross_term_sum(const CorrespondenceMatrix& r,
                      std::span<const std::size_t> subset);

// n choose k, saturating at SIZE_MAX.
std::size_t combination_count(std::size_t n, std::size_t k);

// Chooses k models with the most negative uniform-weight cross-term sum.
// Exhaustive over all subsets when there are at most kExhaustiveLimit of
// them (ties go to the lexicographically smallest index set), greedy
// forward selection otherwise.
SelectionReport anti_correlated_subset(const ResidualSet& rs, std::size_t k);

SelectionReport anti_correlated_subset_exhaustive(const ResidualSet& rs,
                                                  std::size_t k);
SelectionReport anti_correlated_subset_greedy(const ResidualSet& rs,
                                              std::size_t k);

}  // namespace ensavg

#endif  // ENSAVG_SELECTION_HPP
