#include <doctest.h>

#include <random>

#include "ensavg/csv.hpp"
#include "ensavg/errors.hpp"
#include "ensavg/json_io.hpp"
#include "ensavg/report.hpp"
#include "test_support.hpp"

using namespace ensavg;
namespace tst = ensavg::testing;

TEST_CASE("parse_ensemble_csv accepts the minimal file") {
  auto data = parse_ensemble_csv("t,Y,m1\n0,0,1\n1,0,1");
  CHECK(data.obs.values() == Vector{0, 0});
  CHECK(data.obs.times() == std::vector<TimeIndex>{0, 1});
  CHECK(data.ensemble.output(0) == Vector{1, 1});
  CHECK(data.ensemble.names() == std::vector<std::string>{"m1"});
}

TEST_CASE("parse_ensemble_csv sorts rows by time") {
  auto data = parse_ensemble_csv("t,Y,m1\n1,0,1\n0,0,2\n");
  CHECK(data.obs.times() == std::vector<TimeIndex>{0, 1});
  CHECK(data.ensemble.output(0) == Vector{2, 1});
}

TEST_CASE("parse_ensemble_csv handles CRLF, spaces and scientific notation") {
  auto data = parse_ensemble_csv("t, Y, a, b\r\n-1, 1e-3, 2.5E2, -0.5\r\n0,3,4,5\r\n\r\n");
  CHECK(data.obs.start() == -1);
  CHECK(data.obs.values() == Vector{1e-3, 3});
  CHECK(data.ensemble.output(0) == Vector{250, 4});
  CHECK(data.ensemble.names() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("parse_ensemble_csv errors") {
  CHECK_THROWS_AS(parse_ensemble_csv("t,Y\n0,0"), FormatError);
  CHECK_THROWS_AS(parse_ensemble_csv(""), FormatError);
  CHECK_THROWS_AS(parse_ensemble_csv("t,Y,m1\n"), FormatError);
  CHECK_THROWS_AS(parse_ensemble_csv("time,Y,m1\n0,0,1"), FormatError);
  CHECK_THROWS_AS(parse_ensemble_csv("t,Y,a,a\n0,0,1,1"), FormatError);
  CHECK_THROWS_AS(parse_ensemble_csv("t,Y,m1\n0,0,1\n0,0,2"), FormatError);
  CHECK_THROWS_AS(parse_ensemble_csv("t,Y,m1\n0,0,1\n2,0,2"), FormatError);

  SUBCASE("missing cell reports row and column") {
    try {
      parse_ensemble_csv("t,Y,m1,m2\n0,0,1,2\n1,0,\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.row() == 3);
      CHECK(e.column() == 4);
    }
  }
  SUBCASE("empty cell") {
    try {
      parse_ensemble_csv("t,Y,m1\n0,,1\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.row() == 2);
      CHECK(e.column() == 2);
    }
  }
  SUBCASE("non-numeric and locale-formatted values") {
    for (const char* bad : {"abc", "1,5", "nan", "inf", "0x10", "+1", "1.0.0"}) {
      CHECK_THROWS_AS(parse_ensemble_csv(std::string("t,Y,m1\n0,0,") + bad + "\n"),
                      Error);
    }
    CHECK_THROWS_AS(parse_ensemble_csv("t,Y,m1\n0.5,0,1\n"), ParseError);
  }
  CHECK_THROWS_AS(parse_ensemble_csv("t,Y,m1\n0,0,1,9\n"), ParseError);
}

TEST_CASE("csv write and parse is idempotent on the data model") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = tst::random_instance(rng, 1, 6, 1, 20);
    const std::size_t n = inst.residuals.front().size();
    auto y = tst::uniform_residuals(rng, 1, n, -1e6, 1e6).front();
    const auto obs = ObservationSeries::from_values(y, -5 + trial);
    const auto ens = ModelEnsemble::from_outputs(inst.residuals);
    const auto text = write_ensemble_csv(obs, ens);
    const auto parsed = parse_ensemble_csv(text);
    CHECK(parsed.obs == obs);
    CHECK(parsed.ensemble == ens);
    CHECK(write_ensemble_csv(parsed.obs, parsed.ensemble) == text);
  }
}

TEST_CASE("parse_real is strict") {
  double v = 0;
  CHECK(parse_real("1e5", v));
  CHECK(v == 1e5);
  CHECK(parse_real("-0.25", v));
  CHECK_FALSE(parse_real("1e999", v));
  CHECK_FALSE(parse_real(" 1", v));
  CHECK_FALSE(parse_real("1 ", v));
  CHECK_FALSE(parse_real("", v));
}

namespace {

DiagnosticsReport sample_report(const std::vector<Vector>& outputs,
                                const Vector& y) {
  return diagnose(ObservationSeries::from_values(y),
                  ModelEnsemble::from_outputs(outputs),
                  WeightVector(Vector(outputs.size(), 1.0 / outputs.size())),
                  ReportSettings{});
}

}  // namespace

TEST_CASE("emit_report round-trips and is deterministic") {
  const auto report = sample_report({{1, 2, 3}, {0.1, -0.7, 2}, {3, 3, 3}},
                                    {0.3, 1, 2});
  const std::string text = emit_report(report);
  CHECK(text.back() == '\n');
  CHECK(parse_report(text) == report);
  CHECK(emit_report(parse_report(text)) == text);
  CHECK(emit_report(sample_report({{1, 2, 3}, {0.1, -0.7, 2}, {3, 3, 3}},
                                  {0.3, 1, 2})) == text);
}

TEST_CASE("emit_report layout") {
  const auto report = sample_report({{1, 1}, {2, 2}}, {0, 0});
  const std::string text = emit_report(report);
  const auto j = Json::parse(text);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{
                    "schema_version", "interval", "model_names",
                    "weights_used", "per_model_scores", "correspondence",
                    "cosines", "perfect_model", "ensemble_score", "best",
                    "result1", "result2", "result3", "bounds", "regime",
                    "settings"});
  CHECK(j["schema_version"] == "1");
  CHECK(j["correspondence"] == Json::parse("[[1,2],[2,4]]"));
  CHECK(j["regime"] == "Neither");
  CHECK(j["result1"]["hypothesis_holds"] == true);
}

TEST_CASE("floats carry 17 significant digits") {
  Json j;
  j["x"] = 0.1;
  j["y"] = 2.0;
  CHECK(dump_json(j) == "{\n  \"x\": 0.10000000000000001,\n  \"y\": 2\n}\n");
  Json bad;
  bad["z"] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(dump_json(bad), std::logic_error);
}

TEST_CASE("perfect-model report") {
  const auto report = sample_report({{1, 1}, {0, 0}}, {0, 0});
  CHECK_FALSE(report.cosines.has_value());
  CHECK(report.perfect_models == std::vector<std::string>{"m2"});
  CHECK(report.result1.has_value());
  CHECK_FALSE(report.result2.has_value());
  CHECK_FALSE(report.regime.has_value());
  const auto j = Json::parse(emit_report(report));
  CHECK(j["cosines"].is_null());
  CHECK(j["perfect_model"] == Json::parse("[\"m2\"]"));
  CHECK(parse_report(emit_report(report)) == report);
}

TEST_CASE("parse_weights_json") {
  auto w = parse_weights_json("[0.25, 0.75]");
  CHECK(w.values() == Vector{0.25, 0.75});
  auto near = parse_weights_json("[0.3333333333, 0.3333333333, 0.3333333334]");
  CHECK(std::abs(near[0] + near[1] + near[2] - 1.0) <= 1e-12);
  CHECK_THROWS_AS(parse_weights_json("[0.5, 0.6]"), ValidationError);
  CHECK_THROWS_AS(parse_weights_json("[-0.5, 1.5]"), ValidationError);
  CHECK_THROWS_AS(parse_weights_json("{\"w\": 1}"), FormatError);
  CHECK_THROWS_AS(parse_weights_json("[\"a\"]"), FormatError);
  CHECK_THROWS_AS(parse_weights_json("[0.5,"), ParseError);
}
