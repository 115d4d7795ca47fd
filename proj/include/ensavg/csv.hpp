#ifndef ENSAVG_CSV_HPP
#define ENSAVG_CSV_HPP

#include <string>
#include <string_view>

#include "ensavg/core_metrics.hpp"

namespace ensavg {

struct EnsembleData {
  ObservationSeries obs;
  ModelEnsemble ensemble;

  bool operator==(const EnsembleData&) const = default;
};

// Header `t,Y,<model>...`; one row per time point. Rows are sorted by t on
// ingest, and the sorted times must be consecutive integers. Numbers use
// plain decimal or scientific notation; no locale separators, no inf/nan.
EnsembleData parse_ensemble_csv(std::string_view text);

EnsembleData read_ensemble_csv(const std::string& path);

// Inverse of parse_ensemble_csv; values printed with 17 significant digits.
std::string write_ensemble_csv(const ObservationSeries& obs,
                               const ModelEnsemble& ensemble);

// Strict number parsing shared with the weights reader.
bool parse_real(std::string_view text, double& out);
bool parse_integer(std::string_view text, TimeIndex& out);

}  // namespace ensavg

#endif  // ENSAVG_CSV_HPP
