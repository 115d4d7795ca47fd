#include "ensavg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ensavg/errors.hpp"

namespace ensavg {

namespace {

constexpr double kTightCosineTol = 1e-9;

void require_two(const ResidualSet& rs) {
  if (rs.num_models() < 2) throw NeedsTwoModelsError(rs.num_models());
}

ResultVerdict base_verdict(const ResidualSet& rs, const WeightVector& w,
                           const Vector& scores) {
  ResultVerdict v;
  v.best_model_index = best_model(scores);
  v.s_min_sq = scores[v.best_model_index];
  v.s_sq = ensemble_score(rs, w);
  return v;
}

// Threshold S_min^2 / (S_m S_{m'}) for the angle form of results 2 and 3.
double angle_threshold(double s_min_sq, double s_m, double s_mp) {
  return s_min_sq / (s_m * s_mp);
}

}  // namespace

std::string_view regime_name(Regime regime) {
  switch (regime) {
    case Regime::kEquallyGoodLowCorrespondence:
      return "EquallyGoodLowCorrespondence";
    case Regime::kDominantBestPositiveCorrespondence:
      return "DominantBestPositiveCorrespondence";
    case Regime::kNeither:
      return "Neither";
  }
  return "Neither";
}

Regime regime_from_name(std::string_view name) {
  for (Regime r : {Regime::kEquallyGoodLowCorrespondence,
                   Regime::kDominantBestPositiveCorrespondence,
                   Regime::kNeither}) {
    if (regime_name(r) == name) return r;
  }
  throw ValidationError("unknown regime '" + std::string(name) + "'");
}

std::size_t best_model(std::span<const double> scores) {
  if (scores.empty()) throw ValidationError("no scores to rank");
  std::size_t best = 0;
  for (std::size_t m = 1; m < scores.size(); ++m) {
    if (scores[m] < scores[best]) best = m;
  }
  return best;
}

ResultVerdict check_result1(const ResidualSet& rs, const WeightVector& w) {
  require_two(rs);
  const CorrespondenceMatrix r = correspondence_matrix(rs);
  Vector scores(r.size());
  for (std::size_t m = 0; m < r.size(); ++m) scores[m] = r(m, m);
  ResultVerdict v = base_verdict(rs, w, scores);

  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = i + 1; j < r.size(); ++j) {
      if (!(r(i, j) > v.s_min_sq)) v.witnesses.emplace_back(i, j);
    }
  }
  v.hypothesis_holds = v.witnesses.empty();
  v.conclusion_holds = v.s_sq > v.s_min_sq;
  return v;
}

ResultVerdict check_result2(const ResidualSet& rs, const WeightVector& w) {
  require_two(rs);
  const SquareMatrix cosines = cosine_matrix(rs);
  const Vector scores = model_scores(rs);
  ResultVerdict v = base_verdict(rs, w, scores);

  for (std::size_t i = 0; i < scores.size(); ++i) {
    for (std::size_t j = i + 1; j < scores.size(); ++j) {
      const double threshold = angle_threshold(
          v.s_min_sq, std::sqrt(scores[i]), std::sqrt(scores[j]));
      if (!(cosines(i, j) > threshold)) v.witnesses.emplace_back(i, j);
    }
  }
  v.hypothesis_holds = v.witnesses.empty();
  v.conclusion_holds = v.s_sq > v.s_min_sq;
  return v;
}

ResultVerdict check_result3(const ResidualSet& rs, const WeightVector& w) {
  require_two(rs);
  const SquareMatrix cosines = cosine_matrix(rs);
  const Vector scores = model_scores(rs);
  ResultVerdict v = base_verdict(rs, w, scores);

  for (std::size_t i = 0; i < scores.size(); ++i) {
    for (std::size_t j = i + 1; j < scores.size(); ++j) {
      const double threshold = angle_threshold(
          v.s_min_sq, std::sqrt(scores[i]), std::sqrt(scores[j]));
      if (cosines(i, j) < threshold) v.witnesses.emplace_back(i, j);
    }
  }
  v.hypothesis_holds = v.s_sq < v.s_min_sq;
  v.conclusion_holds = !v.witnesses.empty();
  return v;
}

SchwarzBounds schwartz_bounds(const ResidualSet& rs, const WeightVector& w) {
  const CorrespondenceMatrix r = correspondence_matrix(rs);
  SchwarzBounds b;
  double root = 0.0;
  for (std::size_t m = 0; m < r.size(); ++m) root += w[m] * std::sqrt(r(m, m));
  b.upper = root * root;
  b.actual = ensemble_score(rs, w);

  // Zero residuals are parallel to everything and never break tightness.
  b.upper_tight = true;
  for (std::size_t i = 0; i < r.size() && b.upper_tight; ++i) {
    for (std::size_t j = i + 1; j < r.size(); ++j) {
      if (r(i, i) == 0.0 || r(j, j) == 0.0) continue;
      const double cosine = r(i, j) / (std::sqrt(r(i, i)) * std::sqrt(r(j, j)));
      if (std::abs(cosine - 1.0) > kTightCosineTol) {
        b.upper_tight = false;
        break;
      }
    }
  }
  return b;
}

Regime classify_regime(const ResidualSet& rs, double tol_equal,
                       double tol_cos) {
  require_two(rs);
  if (!(tol_equal > 0.0 && tol_equal < 1.0) ||
      !(tol_cos > 0.0 && tol_cos < 1.0)) {
    throw ValidationError("regime tolerances must lie in (0, 1)");
  }
  const SquareMatrix cosines = cosine_matrix(rs);
  const Vector scores = model_scores(rs);
  const std::size_t best = best_model(scores);
  const double s_min_sq = scores[best];
  const std::size_t m_count = scores.size();

  const double s_max_sq = *std::max_element(scores.begin(), scores.end());
  bool low_correspondence = true;
  for (std::size_t i = 0; i < m_count; ++i) {
    for (std::size_t j = i + 1; j < m_count; ++j) {
      if (cosines(i, j) > tol_cos) low_correspondence = false;
    }
  }
  if (s_max_sq / s_min_sq - 1.0 <= tol_equal && low_correspondence) {
    return Regime::kEquallyGoodLowCorrespondence;
  }

  double runner_up = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < m_count; ++m) {
    if (m != best) runner_up = std::min(runner_up, scores[m]);
  }
  bool others_positive = true;
  for (std::size_t i = 0; i < m_count; ++i) {
    for (std::size_t j = i + 1; j < m_count; ++j) {
      if (i == best || j == best) continue;
      if (!(cosines(i, j) > 0.0)) others_positive = false;
    }
  }
  if (s_min_sq <= tol_equal * runner_up && others_positive) {
    return Regime::kDominantBestPositiveCorrespondence;
  }
  return Regime::kNeither;
}

}  // namespace ensavg
