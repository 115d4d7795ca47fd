#ifndef ENSAVG_CORE_METRICS_HPP
#define ENSAVG_CORE_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ensavg {

using TimeIndex = std::int64_t;
using Vector = std::vector<double>;

// Observed values Y_t on consecutive integer times.
class ObservationSeries {
 public:
  ObservationSeries(std::vector<TimeIndex> times, Vector values);

  // Times start, start+1, ... for each value.
  static ObservationSeries from_values(Vector values, TimeIndex start = 0);

  std::size_t size() const { return values_.size(); }
  const std::vector<TimeIndex>& times() const { return times_; }
  const Vector& values() const { return values_; }
  TimeIndex start() const { return times_.front(); }
  TimeIndex end() const { return times_.back(); }

  // (1/T) * sum of Y_t^2.
  double mean_square() const;

  // Points [offset, offset + count).
  ObservationSeries slice(std::size_t offset, std::size_t count) const;

  bool operator==(const ObservationSeries&) const = default;

 private:
  std::vector<TimeIndex> times_;
  Vector values_;
};

// M model output series, each aligned index-for-index with the observations.
class ModelEnsemble {
 public:
  ModelEnsemble(std::vector<std::string> names, std::vector<Vector> outputs);

  // Names default to m1, m2, ...
  static ModelEnsemble from_outputs(std::vector<Vector> outputs);

  std::size_t num_models() const { return outputs_.size(); }
  std::size_t num_points() const { return outputs_.front().size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Vector>& outputs() const { return outputs_; }
  const Vector& output(std::size_t m) const { return outputs_.at(m); }

  ModelEnsemble slice(std::size_t offset, std::size_t count) const;

  bool operator==(const ModelEnsemble&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<Vector> outputs_;
};

// Residual vectors Z_m = X_m - Y in R^T.
class ResidualSet {
 public:
  explicit ResidualSet(std::vector<Vector> residuals,
                       std::vector<std::string> names = {});

  std::size_t num_models() const { return residuals_.size(); }
  // T, the normalization divisor.
  std::size_t n_points() const { return residuals_.front().size(); }
  const std::vector<Vector>& residuals() const { return residuals_; }
  const Vector& residual(std::size_t m) const { return residuals_.at(m); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t m) const { return names_.at(m); }

  ResidualSet slice(std::size_t offset, std::size_t count) const;
  ResidualSet subset(std::span<const std::size_t> models) const;

  bool operator==(const ResidualSet&) const = default;

 private:
  std::vector<Vector> residuals_;
  std::vector<std::string> names_;
};

// Nonnegative weights summing to one.
class WeightVector {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit WeightVector(Vector weights);

  // Checks the simplex constraints at `tolerance`, then divides by the sum.
  static WeightVector normalized(Vector weights, double tolerance);
  static WeightVector indicator(std::size_t num_models, std::size_t m);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t m) const { return weights_[m]; }
  const Vector& values() const { return weights_; }

  bool operator==(const WeightVector&) const = default;

 private:
  Vector weights_;
};

// Dense symmetric M x M matrix, row-major.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0)
      : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }

  Vector multiply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;
  std::vector<Vector> rows() const;
  static SquareMatrix from_rows(const std::vector<Vector>& rows);

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  Vector data_;
};

// Entries R_{m,m'} = (1/T) sum_t Z_{m,t} Z_{m',t}; the diagonal holds S_m^2.
using CorrespondenceMatrix = SquareMatrix;

ResidualSet residuals(const ModelEnsemble& ensemble,
                      const ObservationSeries& obs);

// (1/T) ||z||^2.
double model_score(std::span<const double> z, std::size_t n_points);
Vector model_scores(const ResidualSet& rs);

CorrespondenceMatrix correspondence_matrix(const ResidualSet& rs);

// cos(theta_{m,m'}) = R_{m,m'} / (S_m S_{m'}), clamped to [-1, 1].
// Throws PerfectModelError for the first member with S_m = 0.
SquareMatrix cosine_matrix(const ResidualSet& rs);

// Residual of the weighted average model, sum_m w_m Z_m.
Vector average_residual(const ResidualSet& rs, const WeightVector& w);

// S^2 via the direct form (1/T)||sum_m w_m Z_m||^2, cross-checked against the
// quadratic expansion. Throws std::logic_error if the two disagree.
double ensemble_score(const ResidualSet& rs, const WeightVector& w);

// sum_m w_m^2 S_m^2 + sum_{m != m'} w_m w_m' R_{m,m'}.
double ensemble_score_expanded(const ResidualSet& rs, const WeightVector& w);

// Relative agreement check used by ensemble_score. The scale is the
// sharp upper bound (sum_m w_m S_m)^2 so that cancellations near zero do
// not produce spurious failures.
bool scores_agree(double direct, double expanded, double scale,
                  double rel_tol = 1e-10);

}  // namespace ensavg

#endif  // ENSAVG_CORE_METRICS_HPP
