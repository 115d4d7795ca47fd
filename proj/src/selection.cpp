#include "ensavg/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ensavg/errors.hpp"

namespace ensavg {

namespace {

double observation_denominator(const ResidualSet& rs,
                               const ObservationSeries& obs) {
  if (obs.size() != rs.n_points()) {
    throw AlignmentError("observations and residuals differ in length");
  }
  const double denom = obs.mean_square();
  if (!(denom > 0.0)) throw ZeroNormError();
  return denom;
}

void check_k(const ResidualSet& rs, std::size_t k) {
  if (k < 2 || k > rs.num_models()) {
    throw ValidationError("subset size k=" + std::to_string(k) +
                          " must lie in [2, " +
                          std::to_string(rs.num_models()) + "]");
  }
}

SelectionReport subset_report(const ResidualSet& rs,
                              std::vector<std::size_t> chosen,
                              std::string criterion, double objective) {
  std::sort(chosen.begin(), chosen.end());
  SelectionReport report;
  report.criterion = std::move(criterion);
  report.objective_value = objective;
  std::size_t next = 0;
  for (std::size_t m = 0; m < rs.num_models(); ++m) {
    if (next < chosen.size() && chosen[next] == m) {
      report.kept.push_back(m);
      ++next;
    } else {
      report.dropped.push_back({m, std::nullopt});
    }
  }
  return report;
}

}  // namespace

std::vector<double> screening_ratios(const ResidualSet& rs,
                                     const ObservationSeries& obs) {
  const double denom = observation_denominator(rs, obs);
  std::vector<double> ratios;
  for (double s : model_scores(rs)) ratios.push_back(s / denom);
  return ratios;
}

SelectionReport prescreen(const ResidualSet& rs, const ObservationSeries& obs,
                          double threshold) {
  if (!(threshold > 0.0)) {
    throw ValidationError("screening threshold must be positive");
  }
  SelectionReport report;
  report.criterion = "prescreen";
  report.ratios = screening_ratios(rs, obs);
  for (std::size_t m = 0; m < report.ratios.size(); ++m) {
    if (report.ratios[m] <= threshold) {
      report.kept.push_back(m);
    } else {
      report.dropped.push_back({m, report.ratios[m]});
    }
  }
  return report;
}

bool equally_bad_test(const ResidualSet& rs, const ObservationSeries& obs,
                      double tol_equal, double badness_floor) {
  const double denom = observation_denominator(rs, obs);
  const Vector scores = model_scores(rs);
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  bool equal = false;
  if (*lo > 0.0) {
    equal = *hi / *lo - 1.0 <= tol_equal;
  } else {
    equal = *hi == 0.0;
  }
  return equal && *lo / denom >= badness_floor;
}

double cross_term_sum(const CorrespondenceMatrix& r,
                      std::span<const std::size_t> subset) {
  const double w = 1.0 / static_cast<double>(subset.size());
  double sum = 0.0;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      sum += r(subset[a], subset[b]);
    }
  }
  // Ordered pairs count each unordered pair twice.
  return 2.0 * w * w * sum;
}

std::size_t combination_count(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t numerator = n - k + i;
    if (result > std::numeric_limits<std::size_t>::max() / numerator) {
      return std::numeric_limits<std::size_t>::max();
    }
    // result * numerator is always divisible by i here.
    result = result * numerator / i;
  }
  return result;
}

SelectionReport anti_correlated_subset_exhaustive(const ResidualSet& rs,
                                                  std::size_t k) {
  check_k(rs, k);
  const CorrespondenceMatrix r = correspondence_matrix(rs);
  const std::size_t n = rs.num_models();

  std::vector<std::size_t> current(k);
  for (std::size_t i = 0; i < k; ++i) current[i] = i;
  std::vector<std::size_t> best = current;
  double best_value = cross_term_sum(r, current);

  // Lexicographic enumeration; strict improvement keeps the earliest tie.
  while (true) {
    std::size_t i = k;
    while (i > 0 && current[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++current[i - 1];
    for (std::size_t j = i; j < k; ++j) current[j] = current[j - 1] + 1;
    const double value = cross_term_sum(r, current);
    if (value < best_value) {
      best_value = value;
      best = current;
    }
  }
  return subset_report(rs, std::move(best), "anticorr-exhaustive",
                       best_value);
}

SelectionReport anti_correlated_subset_greedy(const ResidualSet& rs,
                                              std::size_t k) {
  check_k(rs, k);
  const CorrespondenceMatrix r = correspondence_matrix(rs);
  const std::size_t n = rs.num_models();

  std::vector<std::size_t> chosen{0, 1};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (r(i, j) < r(chosen[0], chosen[1])) chosen = {i, j};
    }
  }
  std::vector<bool> used(n, false);
  used[chosen[0]] = used[chosen[1]] = true;

  while (chosen.size() < k) {
    std::size_t pick = n;
    double pick_value = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < n; ++m) {
      if (used[m]) continue;
      chosen.push_back(m);
      const double value = cross_term_sum(r, chosen);
      chosen.pop_back();
      if (value < pick_value) {
        pick_value = value;
        pick = m;
      }
    }
    chosen.push_back(pick);
    used[pick] = true;
  }
  const double objective = cross_term_sum(r, chosen);
  return subset_report(rs, std::move(chosen), "anticorr-greedy", objective);
}

SelectionReport anti_correlated_subset(const ResidualSet& rs, std::size_t k) {
  check_k(rs, k);
  if (combination_count(rs.num_models(), k) <= kExhaustiveLimit) {
    return anti_correlated_subset_exhaustive(rs, k);
  }
  return anti_correlated_subset_greedy(rs, k);
}

}  // namespace ensavg
