#include <doctest.h>

#include <random>

#include "ensavg/diagnostics.hpp"
#include "ensavg/errors.hpp"
#include "ensavg/weights.hpp"
#include "test_support.hpp"

using namespace ensavg;
namespace tst = ensavg::testing;

TEST_CASE("uniform_weights") {
  CHECK(uniform_weights(4).values() == Vector{0.25, 0.25, 0.25, 0.25});
  CHECK(uniform_weights(1).values() == Vector{1.0});
  const auto w3 = uniform_weights(3);
  CHECK(std::abs(w3[0] + w3[1] + w3[2] - 1.0) <= 1e-12);
  CHECK_THROWS_AS(uniform_weights(0), ValidationError);
}

TEST_CASE("gram_matrix") {
  CHECK(gram_matrix(ResidualSet({{1, 1}})).rows() == std::vector<Vector>{{1}});
  CHECK(gram_matrix(ResidualSet({{1, 1}, {2, 2}})).rows() ==
        std::vector<Vector>{{1, 2}, {2, 4}});

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = tst::random_instance(rng, 1, 8, 1, 32);
    ResidualSet rs(inst.residuals);
    WeightVector w(inst.weights);
    const double q = gram_matrix(rs).quadratic_form(w.values());
    CHECK(tst::rel_close(q, ensemble_score(rs, w), 1e-10));
  }
}

TEST_CASE("simplex projection lands on the simplex") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> d(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    Vector p(1 + trial % 7);
    for (auto& v : p) v = d(rng);
    const Vector q = project_to_simplex(p);
    double sum = 0.0;
    for (double v : q) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    // Points already on the simplex are fixed.
    const Vector again = project_to_simplex(q);
    for (std::size_t i = 0; i < q.size(); ++i) {
      CHECK(again[i] == doctest::Approx(q[i]).epsilon(1e-12));
    }
  }
  CHECK(project_to_simplex(Vector{2.0, 0.0}) == Vector{1.0, 0.0});
  CHECK(project_to_simplex(Vector{0.5, 0.5}) == Vector{0.5, 0.5});
}

TEST_CASE("optimal_weights examples") {
  SUBCASE("symmetric cancellation") {
    auto out = optimal_weights(ResidualSet({{1, 1}, {-1, -1}}));
    CHECK(out.weights[0] == doctest::Approx(0.5));
    CHECK(out.weights[1] == doctest::Approx(0.5));
    CHECK(out.score == doctest::Approx(0.0));
    CHECK(out.score <= 1e-12);
  }
  SUBCASE("collinear: best vertex") {
    auto out = optimal_weights(ResidualSet({{1, 1}, {2, 2}}));
    CHECK(out.weights[0] == doctest::Approx(1.0));
    CHECK(out.weights[1] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(out.score == doctest::Approx(1.0));
    CHECK(out.active_support == std::vector<std::size_t>{0});
    CHECK(out.score <= tst::grid_search_minimum({{1, 1}, {2, 2}}, 0.001) + 1e-12);
  }
  SUBCASE("orthogonal: centroid") {
    auto out = optimal_weights(ResidualSet({{1, 0}, {0, 1}}));
    CHECK(out.weights[0] == doctest::Approx(0.5));
    CHECK(out.score == doctest::Approx(0.25));
    CHECK(out.converged);
    CHECK(out.score <= tst::grid_search_minimum({{1, 0}, {0, 1}}, 0.001) + 1e-12);
  }
  SUBCASE("perfect member takes all the weight") {
    auto out = optimal_weights(ResidualSet({{1, 2}, {0, 0}, {-1, -2}}));
    CHECK(out.score == 0.0);
    CHECK(out.weights.values() == Vector{0, 1, 0});
  }
  SUBCASE("single model") {
    auto out = optimal_weights(ResidualSet({{3, 4}}));
    CHECK(out.weights.values() == Vector{1.0});
    CHECK(out.score == 12.5);
  }
  CHECK_THROWS_AS(optimal_weights(ResidualSet({{1, 1}}), {0, 1e-12}),
                  ValidationError);
  CHECK_THROWS_AS(optimal_weights(ResidualSet({{1, 1}}), {10, 0.0}),
                  ValidationError);
}

TEST_CASE("optimizer beats grid search and dominates vertices and centroid") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = tst::random_instance(rng, 1, 3, 1, 32);
    ResidualSet rs(inst.residuals);
    auto out = optimal_weights(rs);
    const double grid = tst::grid_search_minimum(inst.residuals, 0.01);
    CHECK(out.score <= grid + 1e-4);
    CHECK(out.score <= tst::oracle_min_score(inst.residuals) + 1e-9);
    CHECK(out.score <=
          ensemble_score(rs, uniform_weights(rs.num_models())) + 1e-9);
    double sum = 0.0;
    for (double w : out.weights.values()) sum += w;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("optimizer invariants hold even when stopped early") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = tst::random_instance(rng, 2, 8, 2, 16);
    ResidualSet rs(inst.residuals);
    auto out = optimal_weights(rs, {1, 1e-12});
    CHECK(out.iterations == 1);
    CHECK(out.score <= tst::oracle_min_score(inst.residuals) + 1e-9);
    CHECK(out.score <=
          ensemble_score(rs, uniform_weights(rs.num_models())) + 1e-9);
  }
}

TEST_CASE("optimizer is deterministic") {
  ResidualSet rs({{1, 2, -1}, {-2, 0.5, 1}, {0.3, -1, 2}, {1, 1, 1}});
  auto a = optimal_weights(rs);
  auto b = optimal_weights(rs);
  CHECK(a.weights == b.weights);
  CHECK(a.score == b.score);
  CHECK(a.iterations == b.iterations);
}
