#include "ensavg/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ensavg/errors.hpp"

namespace ensavg {

namespace {

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void write_value(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent) + 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(key).dump() + ": ";
        write_value(value, out, indent + 2);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += inner;
        write_value(value, out, indent + 2);
      }
      out += flat ? "]" : "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        throw std::logic_error("refusing to serialize a non-finite number");
      }
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

Json matrix_to_json(const std::vector<Vector>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) out.push_back(row);
  return out;
}

std::vector<Vector> matrix_from_json(const Json& j) {
  std::vector<Vector> rows;
  for (const auto& row : j) rows.push_back(row.get<Vector>());
  return rows;
}

Json optional_verdict(const std::optional<ResultVerdict>& v) {
  return v ? verdict_to_json(*v) : Json(nullptr);
}

std::optional<ResultVerdict> optional_verdict_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return verdict_from_json(j);
}

Json settings_to_json(const ReportSettings& s) {
  Json j;
  j["tol_equal"] = s.tol_equal;
  j["tol_cos"] = s.tol_cos;
  j["opt_tol"] = s.opt_tol;
  j["opt_max_iter"] = s.opt_max_iter;
  j["weights"] = s.weights_source;
  j["calibration_end"] =
      s.calibration_end ? Json(*s.calibration_end) : Json(nullptr);
  return j;
}

ReportSettings settings_from_json(const Json& j) {
  ReportSettings s;
  s.tol_equal = j.at("tol_equal").get<double>();
  s.tol_cos = j.at("tol_cos").get<double>();
  s.opt_tol = j.at("opt_tol").get<double>();
  s.opt_max_iter = j.at("opt_max_iter").get<std::size_t>();
  s.weights_source = j.at("weights").get<std::string>();
  if (!j.at("calibration_end").is_null()) {
    s.calibration_end = j.at("calibration_end").get<TimeIndex>();
  }
  return s;
}

}  // namespace

std::string dump_json(const Json& value) {
  std::string out;
  write_value(value, out, 0);
  out += "\n";
  return out;
}

Json verdict_to_json(const ResultVerdict& v) {
  Json j;
  j["hypothesis_holds"] = v.hypothesis_holds;
  j["conclusion_holds"] = v.conclusion_holds;
  Json pairs = Json::array();
  for (const auto& [a, b] : v.witnesses) pairs.push_back({a, b});
  j["witnesses"] = pairs;
  j["s_min_sq"] = v.s_min_sq;
  j["s_sq"] = v.s_sq;
  j["best_model_index"] = v.best_model_index;
  return j;
}

ResultVerdict verdict_from_json(const Json& j) {
  ResultVerdict v;
  v.hypothesis_holds = j.at("hypothesis_holds").get<bool>();
  v.conclusion_holds = j.at("conclusion_holds").get<bool>();
  for (const auto& pair : j.at("witnesses")) {
    v.witnesses.emplace_back(pair.at(0).get<std::size_t>(),
                             pair.at(1).get<std::size_t>());
  }
  v.s_min_sq = j.at("s_min_sq").get<double>();
  v.s_sq = j.at("s_sq").get<double>();
  v.best_model_index = j.at("best_model_index").get<std::size_t>();
  return v;
}

Json report_to_json(const DiagnosticsReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["interval"] = {{"start", r.interval.start},
                   {"end", r.interval.end},
                   {"n_points", r.interval.n_points}};
  j["model_names"] = r.model_names;
  j["weights_used"] = r.weights_used;
  j["per_model_scores"] = r.per_model_scores;
  j["correspondence"] = matrix_to_json(r.correspondence);
  j["cosines"] = r.cosines ? matrix_to_json(*r.cosines) : Json(nullptr);
  j["perfect_model"] = r.perfect_models;
  j["ensemble_score"] = r.ensemble_score;
  j["best"] = {{"index", r.best.index},
               {"name", r.best.name},
               {"s_min_sq", r.best.s_min_sq}};
  j["result1"] = optional_verdict(r.result1);
  j["result2"] = optional_verdict(r.result2);
  j["result3"] = optional_verdict(r.result3);
  j["bounds"] = {{"lower", r.bounds.lower},
                 {"upper", r.bounds.upper},
                 {"actual", r.bounds.actual},
                 {"upper_tight", r.bounds.upper_tight}};
  j["regime"] = r.regime ? Json(std::string(regime_name(*r.regime)))
                         : Json(nullptr);
  j["settings"] = settings_to_json(r.settings);
  return j;
}

DiagnosticsReport report_from_json(const Json& j) {
  if (j.at("schema_version") != kSchemaVersion) {
    throw FormatError("unsupported report schema version");
  }
  DiagnosticsReport r;
  const Json& interval = j.at("interval");
  r.interval = {interval.at("start").get<TimeIndex>(),
                interval.at("end").get<TimeIndex>(),
                interval.at("n_points").get<std::size_t>()};
  r.model_names = j.at("model_names").get<std::vector<std::string>>();
  r.weights_used = j.at("weights_used").get<Vector>();
  r.per_model_scores = j.at("per_model_scores").get<Vector>();
  r.correspondence = matrix_from_json(j.at("correspondence"));
  if (!j.at("cosines").is_null()) r.cosines = matrix_from_json(j.at("cosines"));
  r.perfect_models = j.at("perfect_model").get<std::vector<std::string>>();
  r.ensemble_score = j.at("ensemble_score").get<double>();
  const Json& best = j.at("best");
  r.best = {best.at("index").get<std::size_t>(),
            best.at("name").get<std::string>(),
            best.at("s_min_sq").get<double>()};
  r.result1 = optional_verdict_from(j.at("result1"));
  r.result2 = optional_verdict_from(j.at("result2"));
  r.result3 = optional_verdict_from(j.at("result3"));
  const Json& bounds = j.at("bounds");
  r.bounds = {bounds.at("lower").get<double>(),
              bounds.at("upper").get<double>(),
              bounds.at("actual").get<double>(),
              bounds.at("upper_tight").get<bool>()};
  if (!j.at("regime").is_null()) {
    r.regime = regime_from_name(j.at("regime").get<std::string>());
  }
  r.settings = settings_from_json(j.at("settings"));
  return r;
}

std::string emit_report(const DiagnosticsReport& report) {
  return dump_json(report_to_json(report));
}

DiagnosticsReport parse_report(std::string_view text) {
  try {
    return report_from_json(Json::parse(text));
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
}

Json outcome_to_json(const OptimizationOutcome& outcome,
                     const std::vector<std::string>& model_names,
                     const OptimizerSettings& settings) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["model_names"] = model_names;
  j["weights"] = outcome.weights.values();
  j["score"] = outcome.score;
  j["iterations"] = outcome.iterations;
  j["converged"] = outcome.converged;
  j["active_support"] = outcome.active_support;
  j["settings"] = {{"opt_tol", settings.tol},
                   {"opt_max_iter", settings.max_iter}};
  return j;
}

Json selection_to_json(const SelectionReport& report,
                       const std::vector<std::string>& model_names) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["criterion"] = report.criterion;
  j["model_names"] = model_names;
  j["kept"] = report.kept;
  Json kept_names = Json::array();
  for (std::size_t m : report.kept) kept_names.push_back(model_names.at(m));
  j["kept_names"] = kept_names;
  Json dropped = Json::array();
  for (const auto& d : report.dropped) {
    Json entry;
    entry["index"] = d.index;
    entry["name"] = model_names.at(d.index);
    entry["ratio"] = d.ratio ? Json(*d.ratio) : Json(nullptr);
    dropped.push_back(entry);
  }
  j["dropped"] = dropped;
  j["ratios"] = report.ratios;
  j["objective_value"] =
      report.objective_value ? Json(*report.objective_value) : Json(nullptr);
  return j;
}

Json sweep_to_json(const std::vector<SweepRow>& rows,
                   const std::vector<std::string>& model_names,
                   const WeightVector& weights, std::size_t window,
                   std::size_t stride) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["model_names"] = model_names;
  j["weights_used"] = weights.values();
  j["window"] = window;
  j["stride"] = stride;
  Json out = Json::array();
  for (const auto& row : rows) {
    Json r;
    r["window_start"] = row.window_start;
    r["window_end"] = row.window_end;
    r["best_model_index"] = row.best_model_index;
    r["best_model_name"] = model_names.at(row.best_model_index);
    r["s_min_sq"] = row.s_min_sq;
    r["s_sq"] = row.s_sq;
    r["average_wins"] = row.average_wins;
    r["model_scores"] = row.model_scores;
    out.push_back(r);
  }
  j["rows"] = out;
  return j;
}

Json calibration_to_json(const CalibrationResult& result,
                         const std::vector<std::string>& model_names) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  Json cal;
  cal["boundary"] = result.boundary;
  cal["model_names"] = model_names;
  cal["weights"] = result.calibration_weights.values();
  cal["score"] = result.calibration.score;
  cal["iterations"] = result.calibration.iterations;
  cal["converged"] = result.calibration.converged;
  cal["active_support"] = result.calibration.active_support;
  j["calibration"] = cal;
  j["validation"] = report_to_json(result.validation_report);
  return j;
}

WeightVector parse_weights_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(1, 1, std::string("weights are not valid JSON: ") +
                               e.what());
  }
  if (!j.is_array()) throw FormatError("weights file must hold a JSON array");
  Vector w;
  for (const auto& v : j) {
    if (!v.is_number()) throw FormatError("weights must all be numbers");
    w.push_back(v.get<double>());
  }
  return WeightVector::normalized(std::move(w), 1e-9);
}

}  // namespace ensavg
