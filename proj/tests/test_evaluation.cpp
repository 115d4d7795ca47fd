#include <doctest.h>

#include <random>

#include "ensavg/diagnostics.hpp"
#include "ensavg/errors.hpp"
#include "ensavg/evaluation.hpp"
#include "test_support.hpp"

using namespace ensavg;
namespace tst = ensavg::testing;

namespace {

ModelEnsemble iota_ensemble(std::size_t n) {
  Vector a(n);
  Vector b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = static_cast<double>(i);
    b[i] = -static_cast<double>(i) * 0.5;
  }
  return ModelEnsemble({"a", "b"}, {a, b});
}

}  // namespace

TEST_CASE("split_interval") {
  const auto obs = ObservationSeries::from_values(Vector(10, 1.0));
  const auto ens = iota_ensemble(10);
  auto split = split_interval(obs, ens, 6);
  CHECK(split.calibration.obs.size() == 7);
  CHECK(split.validation.obs.size() == 3);
  CHECK(split.validation.obs.start() == 7);
  CHECK(split.calibration.ensemble.names() == ens.names());

  SUBCASE("concatenation reproduces the original") {
    for (TimeIndex boundary = 0; boundary < 9; ++boundary) {
      auto s = split_interval(obs, ens, boundary);
      auto times = s.calibration.obs.times();
      auto values = s.calibration.obs.values();
      times.insert(times.end(), s.validation.obs.times().begin(),
                   s.validation.obs.times().end());
      values.insert(values.end(), s.validation.obs.values().begin(),
                    s.validation.obs.values().end());
      CHECK(ObservationSeries(times, values) == obs);
      for (std::size_t m = 0; m < ens.num_models(); ++m) {
        auto x = s.calibration.ensemble.output(m);
        const auto& v = s.validation.ensemble.output(m);
        x.insert(x.end(), v.begin(), v.end());
        CHECK(x == ens.output(m));
      }
    }
  }
  SUBCASE("boundary 0 leaves a single calibration point") {
    CHECK(split_interval(obs, ens, 0).calibration.obs.size() == 1);
  }
  CHECK_THROWS_AS(split_interval(obs, ens, -1), ValidationError);
  CHECK_THROWS_AS(split_interval(obs, ens, 9), ValidationError);
  CHECK_THROWS_AS(split_interval(obs, ens, 42), ValidationError);
}

TEST_CASE("split honours a non-zero start time") {
  const auto obs = ObservationSeries::from_values({1, 2, 3, 4}, 100);
  const auto ens = iota_ensemble(4);
  auto s = split_interval(obs, ens, 101);
  CHECK(s.calibration.obs.size() == 2);
  CHECK(s.validation.obs.start() == 102);
  CHECK_THROWS_AS(split_interval(obs, ens, 1), ValidationError);
}

TEST_CASE("sweep_best_model") {
  const WeightVector half({0.5, 0.5});
  SUBCASE("best model alternates and the average never wins") {
    auto rows = sweep_best_model(ObservationSeries::from_values({0, 0, 0, 0}),
                                 ModelEnsemble::from_outputs(
                                     {{0, 0, 2, 2}, {2, 2, 0, 0}}),
                                 2, 2, half);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].best_model_index == 0);
    CHECK(rows[1].best_model_index == 1);
    CHECK(rows[0].window_start == 0);
    CHECK(rows[0].window_end == 1);
    CHECK(rows[1].window_start == 2);
    for (const auto& row : rows) {
      CHECK(row.s_min_sq == 0.0);
      CHECK(row.s_sq == 1.0);
      CHECK_FALSE(row.average_wins);
    }
  }
  SUBCASE("cancellation wins") {
    auto rows = sweep_best_model(ObservationSeries::from_values({0, 0, 0, 0}),
                                 ModelEnsemble::from_outputs(
                                     {{1, 1, -1, -1}, {-1, -1, 1, 1}}),
                                 4, 1, half);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].s_sq == 0.0);
    CHECK(rows[0].s_min_sq == 1.0);
    CHECK(rows[0].average_wins);
  }
  SUBCASE("full window matches global diagnostics") {
    const auto obs = ObservationSeries::from_values({0.5, -1, 2, 0});
    const auto ens = ModelEnsemble::from_outputs({{1, 0, 2, 1}, {0, -2, 3, -1}});
    auto rows = sweep_best_model(obs, ens, 4, 3, half);
    REQUIRE(rows.size() == 1);
    const auto v = check_result1(residuals(ens, obs), half);
    CHECK(rows[0].s_sq == v.s_sq);
    CHECK(rows[0].s_min_sq == v.s_min_sq);
    CHECK(rows[0].best_model_index == v.best_model_index);
  }
  SUBCASE("partial trailing window dropped") {
    auto rows = sweep_best_model(ObservationSeries::from_values(Vector(7, 0.0)),
                                 iota_ensemble(7), 3, 2, half);
    CHECK(rows.size() == 3);
    CHECK(rows.back().window_end == 6);
  }
  const auto obs = ObservationSeries::from_values({0, 0});
  const auto ens = iota_ensemble(2);
  CHECK_THROWS_AS(sweep_best_model(obs, ens, 3, 1, half), ValidationError);
  CHECK_THROWS_AS(sweep_best_model(obs, ens, 0, 1, half), ValidationError);
  CHECK_THROWS_AS(sweep_best_model(obs, ens, 1, 0, half), ValidationError);
}

TEST_CASE("sweep rows agree with result 3 per window") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = tst::random_instance(rng, 2, 5, 8, 24);
    const std::size_t n = inst.residuals.front().size();
    const auto obs = ObservationSeries::from_values(Vector(n, 0.0));
    const auto ens = ModelEnsemble::from_outputs(inst.residuals);
    const WeightVector w(inst.weights);
    const auto rows = sweep_best_model(obs, ens, 4, 3, w);
    std::size_t offset = 0;
    for (const auto& row : rows) {
      const auto part = residuals(ens, obs).slice(offset, 4);
      const auto v = check_result3(part, w);
      CHECK(row.average_wins == v.hypothesis_holds);
      if (row.average_wins) CHECK(v.conclusion_holds);
      offset += 3;
    }
  }
}

TEST_CASE("calibrate_then_validate") {
  SUBCASE("identical halves") {
    const auto obs = ObservationSeries::from_values({0, 0, 0, 0});
    const auto ens =
        ModelEnsemble::from_outputs({{1, -2, 1, -2}, {-1, 0.5, -1, 0.5}});
    auto result = calibrate_then_validate(obs, ens, 1);
    CHECK(result.validation_report.ensemble_score ==
          doctest::Approx(result.calibration.score).epsilon(1e-12));
  }
  SUBCASE("weights fit on calibration, scored on validation") {
    const auto obs = ObservationSeries::from_values({0, 0, 0, 0});
    const auto ens = ModelEnsemble::from_outputs({{1, 1, 2, 2}, {-1, -1, 2, 2}});
    auto result = calibrate_then_validate(obs, ens, 1);
    CHECK(result.calibration_weights[0] == doctest::Approx(0.5));
    CHECK(result.calibration_weights[1] == doctest::Approx(0.5));
    const auto& report = result.validation_report;
    CHECK(report.ensemble_score == doctest::Approx(4.0));
    CHECK(report.best.s_min_sq == 4.0);
    REQUIRE(report.result3.has_value());
    CHECK_FALSE(report.result3->hypothesis_holds);
    CHECK(report.settings.weights_source == "calibrated");
    CHECK(report.settings.calibration_end == 1);
    CHECK(report.interval.start == 2);
  }
  SUBCASE("single model") {
    const auto obs = ObservationSeries::from_values({0, 1, 2});
    const auto ens = ModelEnsemble::from_outputs({{1, 1, 1}});
    auto result = calibrate_then_validate(obs, ens, 0);
    CHECK(result.calibration_weights.values() == Vector{1.0});
    const auto& report = result.validation_report;
    CHECK(report.per_model_scores[0] == doctest::Approx(0.5));
    CHECK(report.ensemble_score == report.per_model_scores[0]);
    CHECK_FALSE(report.result1.has_value());
  }
}

TEST_CASE("disjoint windows average to the whole-interval score") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t window = 1 + trial % 6;
    const std::size_t count = 1 + trial % 5;
    auto z = tst::uniform_residuals(rng, 3, window * count);
    const auto obs = ObservationSeries::from_values(Vector(window * count, 0.0));
    const auto ens = ModelEnsemble::from_outputs(z);
    const auto rows = sweep_best_model(obs, ens, window, window, uniform_weights(3));
    REQUIRE(rows.size() == count);
    const auto whole = model_scores(residuals(ens, obs));
    for (std::size_t m = 0; m < 3; ++m) {
      double mean = 0.0;
      for (const auto& row : rows) mean += row.model_scores[m] * window;
      mean /= static_cast<double>(window * count);
      CHECK(tst::rel_close(mean, whole[m], 1e-10));
    }
  }
}
