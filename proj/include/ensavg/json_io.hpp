#ifndef ENSAVG_JSON_IO_HPP
#define ENSAVG_JSON_IO_HPP

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ensavg/evaluation.hpp"
#include "ensavg/report.hpp"
#include "ensavg/selection.hpp"
#include "ensavg/weights.hpp"

namespace ensavg {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

// Pretty-printed, newline-terminated JSON. Object keys keep insertion order
// and floating-point values carry 17 significant digits. Throws
// std::logic_error on NaN or infinity.
std::string dump_json(const Json& value);

// Report object with keys in this order: schema_version, interval,
// model_names, weights_used, per_model_scores, correspondence, cosines,
// perfect_model, ensemble_score, best, result1, result2, result3, bounds,
// regime, settings. Model indices are 0-based.
Json report_to_json(const DiagnosticsReport& report);
DiagnosticsReport report_from_json(const Json& j);

std::string emit_report(const DiagnosticsReport& report);
DiagnosticsReport parse_report(std::string_view text);

Json verdict_to_json(const ResultVerdict& verdict);
ResultVerdict verdict_from_json(const Json& j);

Json outcome_to_json(const OptimizationOutcome& outcome,
                     const std::vector<std::string>& model_names,
                     const OptimizerSettings& settings);
Json selection_to_json(const SelectionReport& report,
                       const std::vector<std::string>& model_names);
Json sweep_to_json(const std::vector<SweepRow>& rows,
                   const std::vector<std::string>& model_names,
                   const WeightVector& weights, std::size_t window,
                   std::size_t stride);
Json calibration_to_json(const CalibrationResult& result,
                         const std::vector<std::string>& model_names);

// A JSON array of nonnegative numbers that sums to 1 within 1e-9; the
// result is renormalized to the exact simplex.
WeightVector parse_weights_json(std::string_view text);

}  // namespace ensavg

#endif  // ENSAVG_JSON_IO_HPP
