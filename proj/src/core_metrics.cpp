#include "ensavg/core_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "ensavg/errors.hpp"

namespace ensavg {

namespace {

void require_finite(std::span<const double> values, const std::string& what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError(what + " has a non-finite value at position " +
                            std::to_string(i));
    }
  }
}

std::vector<std::string> default_names(std::size_t m) {
  std::vector<std::string> names;
  names.reserve(m);
  for (std::size_t i = 0; i < m; ++i) names.push_back("m" + std::to_string(i + 1));
  return names;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) sum += a[t] * b[t];
  return sum;
}

}  // namespace

// ---------------------------------------------------------------------------
ObservationSeries::ObservationSeries(std::vector<TimeIndex> times, Vector values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (values_.empty()) throw ValidationError("observation series is empty");
  if (times_.size() != values_.size()) {
    throw AlignmentError("observation times and values differ in length");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (times_[i] != times_[i - 1] + 1) {
      throw ValidationError(
          "observation times must be consecutive integers; found " +
          std::to_string(times_[i - 1]) + " followed by " +
          std::to_string(times_[i]));
    }
  }
  require_finite(values_, "observation series");
}

ObservationSeries ObservationSeries::from_values(Vector values,
                                                 TimeIndex start) {
  std::vector<TimeIndex> times(values.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    times[i] = start + static_cast<TimeIndex>(i);
  }
  return ObservationSeries(std::move(times), std::move(values));
}

double ObservationSeries::mean_square() const {
  return model_score(values_, values_.size());
}

ObservationSeries ObservationSeries::slice(std::size_t offset,
                                           std::size_t count) const {
  if (count == 0 || offset + count > size()) {
    throw ValidationError("observation slice out of range");
  }
  auto b = static_cast<std::ptrdiff_t>(offset);
  auto e = static_cast<std::ptrdiff_t>(offset + count);
  return ObservationSeries({times_.begin() + b, times_.begin() + e},
                           {values_.begin() + b, values_.begin() + e});
}

// ---------------------------------------------------------------------------
ModelEnsemble::ModelEnsemble(std::vector<std::string> names,
                             std::vector<Vector> outputs)
    : names_(std::move(names)), outputs_(std::move(outputs)) {
  if (outputs_.empty()) throw ValidationError("ensemble has no models");
  if (names_.size() != outputs_.size()) {
    throw ValidationError("ensemble needs one name per model");
  }
  std::set<std::string> seen;
  for (const auto& name : names_) {
    if (name.empty()) throw ValidationError("model names must be non-empty");
    if (!seen.insert(name).second) {
      throw ValidationError("duplicate model name '" + name + "'");
    }
  }
  const std::size_t n = outputs_.front().size();
  if (n == 0) throw ValidationError("model outputs are empty");
  for (std::size_t m = 0; m < outputs_.size(); ++m) {
    if (outputs_[m].size() != n) {
      throw AlignmentError("model '" + names_[m] + "' has " +
                           std::to_string(outputs_[m].size()) +
                           " points, expected " + std::to_string(n));
    }
    require_finite(outputs_[m], "model '" + names_[m] + "'");
  }
}

ModelEnsemble ModelEnsemble::from_outputs(std::vector<Vector> outputs) {
  auto names = default_names(outputs.size());
  return ModelEnsemble(std::move(names), std::move(outputs));
}

ModelEnsemble ModelEnsemble::slice(std::size_t offset,
                                   std::size_t count) const {
  if (count == 0 || offset + count > num_points()) {
    throw ValidationError("ensemble slice out of range");
  }
  std::vector<Vector> out;
  out.reserve(outputs_.size());
  for (const auto& x : outputs_) {
    out.emplace_back(x.begin() + static_cast<std::ptrdiff_t>(offset),
                     x.begin() + static_cast<std::ptrdiff_t>(offset + count));
  }
  return ModelEnsemble(names_, std::move(out));
}

// ---------------------------------------------------------------------------
ResidualSet::ResidualSet(std::vector<Vector> residuals,
                         std::vector<std::string> names)
    : residuals_(std::move(residuals)), names_(std::move(names)) {
  if (residuals_.empty()) throw ValidationError("residual set has no models");
  if (names_.empty()) names_ = default_names(residuals_.size());
  if (names_.size() != residuals_.size()) {
    throw ValidationError("residual set needs one name per model");
  }
  const std::size_t n = residuals_.front().size();
  if (n == 0) throw ValidationError("residual vectors are empty");
  for (std::size_t m = 0; m < residuals_.size(); ++m) {
    if (residuals_[m].size() != n) {
      throw AlignmentError("residual vectors differ in length");
    }
    require_finite(residuals_[m], "residual of '" + names_[m] + "'");
  }
}

ResidualSet ResidualSet::slice(std::size_t offset, std::size_t count) const {
  if (count == 0 || offset + count > n_points()) {
    throw ValidationError("residual slice out of range");
  }
  std::vector<Vector> out;
  out.reserve(residuals_.size());
  for (const auto& z : residuals_) {
    out.emplace_back(z.begin() + static_cast<std::ptrdiff_t>(offset),
                     z.begin() + static_cast<std::ptrdiff_t>(offset + count));
  }
  return ResidualSet(std::move(out), names_);
}

ResidualSet ResidualSet::subset(std::span<const std::size_t> models) const {
  std::vector<Vector> out;
  std::vector<std::string> names;
  for (std::size_t m : models) {
    out.push_back(residual(m));
    names.push_back(name(m));
  }
  return ResidualSet(std::move(out), std::move(names));
}

// ---------------------------------------------------------------------------
WeightVector::WeightVector(Vector weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ValidationError("weight vector is empty");
  double sum = 0.0;
  for (std::size_t m = 0; m < weights_.size(); ++m) {
    const double w = weights_[m];
    if (!std::isfinite(w) || w < 0.0) {
      throw ValidationError("weight " + std::to_string(m) +
                            " is negative or non-finite");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ValidationError("weights sum to " + std::to_string(sum) +
                          ", expected 1");
  }
}

WeightVector WeightVector::normalized(Vector weights, double tolerance) {
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ValidationError("weights must be finite and nonnegative");
    }
    sum += w;
  }
  if (weights.empty() || std::abs(sum - 1.0) > tolerance) {
    throw ValidationError("weights must sum to 1 within " +
                          std::to_string(tolerance));
  }
  for (double& w : weights) w /= sum;
  return WeightVector(std::move(weights));
}

WeightVector WeightVector::indicator(std::size_t num_models, std::size_t m) {
  if (m >= num_models) throw ValidationError("indicator index out of range");
  Vector w(num_models, 0.0);
  w[m] = 1.0;
  return WeightVector(std::move(w));
}

// ---------------------------------------------------------------------------
Vector SquareMatrix::multiply(std::span<const double> x) const {
  Vector y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sum += (*this)(i, j) * x[j];
    y[i] = sum;
  }
  return y;
}

double SquareMatrix::quadratic_form(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) sum += x[i] * (*this)(i, j) * x[j];
  }
  return sum;
}

std::vector<Vector> SquareMatrix::rows() const {
  std::vector<Vector> out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    out[i].assign(data_.begin() + static_cast<std::ptrdiff_t>(i * n_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_));
  }
  return out;
}

SquareMatrix SquareMatrix::from_rows(const std::vector<Vector>& rows) {
  SquareMatrix out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw ValidationError("matrix is not square");
    }
    for (std::size_t j = 0; j < rows.size(); ++j) out(i, j) = rows[i][j];
  }
  return out;
}

// ---------------------------------------------------------------------------
ResidualSet residuals(const ModelEnsemble& ensemble,
                      const ObservationSeries& obs) {
  if (ensemble.num_points() != obs.size()) {
    throw AlignmentError("ensemble has " +
                         std::to_string(ensemble.num_points()) +
                         " points but observations have " +
                         std::to_string(obs.size()));
  }
  const Vector& y = obs.values();
  std::vector<Vector> z;
  z.reserve(ensemble.num_models());
  for (const auto& x : ensemble.outputs()) {
    Vector r(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) r[t] = x[t] - y[t];
    z.push_back(std::move(r));
  }
  return ResidualSet(std::move(z), ensemble.names());
}

double model_score(std::span<const double> z, std::size_t n_points) {
  if (z.empty() || n_points == 0) {
    throw ValidationError("cannot score an empty residual vector");
  }
  if (z.size() != n_points) {
    throw ValidationError("residual length does not match point count");
  }
  return dot(z, z) / static_cast<double>(n_points);
}

Vector model_scores(const ResidualSet& rs) {
  Vector out;
  out.reserve(rs.num_models());
  for (const auto& z : rs.residuals()) out.push_back(model_score(z, rs.n_points()));
  return out;
}

CorrespondenceMatrix correspondence_matrix(const ResidualSet& rs) {
  const std::size_t m_count = rs.num_models();
  const auto n = static_cast<double>(rs.n_points());
  CorrespondenceMatrix r(m_count);
  for (std::size_t i = 0; i < m_count; ++i) {
    r(i, i) = model_score(rs.residual(i), rs.n_points());
    for (std::size_t j = i + 1; j < m_count; ++j) {
      const double v = dot(rs.residual(i), rs.residual(j)) / n;
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

SquareMatrix cosine_matrix(const ResidualSet& rs) {
  const CorrespondenceMatrix r = correspondence_matrix(rs);
  const std::size_t m_count = rs.num_models();
  Vector s(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    if (r(m, m) == 0.0) throw PerfectModelError(m, rs.name(m));
    s[m] = std::sqrt(r(m, m));
  }
  SquareMatrix c(m_count);
  for (std::size_t i = 0; i < m_count; ++i) {
    c(i, i) = 1.0;
    for (std::size_t j = i + 1; j < m_count; ++j) {
      const double v = std::clamp(r(i, j) / (s[i] * s[j]), -1.0, 1.0);
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  return c;
}

Vector average_residual(const ResidualSet& rs, const WeightVector& w) {
  if (w.size() != rs.num_models()) {
    throw ValidationError("weight vector has " + std::to_string(w.size()) +
                          " entries for " + std::to_string(rs.num_models()) +
                          " models");
  }
  Vector avg(rs.n_points(), 0.0);
  for (std::size_t m = 0; m < rs.num_models(); ++m) {
    // Zero weights are skipped so an indicator weight is bit-exact.
    if (w[m] == 0.0) continue;
    const Vector& z = rs.residual(m);
    for (std::size_t t = 0; t < avg.size(); ++t) avg[t] += w[m] * z[t];
  }
  return avg;
}

double ensemble_score_expanded(const ResidualSet& rs, const WeightVector& w) {
  if (w.size() != rs.num_models()) {
    throw ValidationError("weight vector does not match model count");
  }
  const CorrespondenceMatrix r = correspondence_matrix(rs);
  double diagonal = 0.0;
  double cross = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    diagonal += w[i] * w[i] * r(i, i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (i != j) cross += w[i] * w[j] * r(i, j);
    }
  }
  return diagonal + cross;
}

bool scores_agree(double direct, double expanded, double scale,
                  double rel_tol) {
  const double ref = std::max({std::abs(direct), std::abs(expanded), scale});
  return std::abs(direct - expanded) <= rel_tol * ref;
}

double ensemble_score(const ResidualSet& rs, const WeightVector& w) {
  const Vector avg = average_residual(rs, w);
  const double direct = model_score(avg, rs.n_points());
  const double expanded = ensemble_score_expanded(rs, w);
  double upper_root = 0.0;
  for (std::size_t m = 0; m < rs.num_models(); ++m) {
    upper_root += w[m] * std::sqrt(model_score(rs.residual(m), rs.n_points()));
  }
  if (!scores_agree(direct, expanded, upper_root * upper_root)) {
    throw std::logic_error("direct and expanded ensemble scores disagree: " +
                           std::to_string(direct) + " vs " +
                           std::to_string(expanded));
  }
  return direct;
}

}  // namespace ensavg
