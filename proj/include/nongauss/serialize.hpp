#pragma once

// JSON forms:
//   state     {"kind": "vector"|"density", "modes", "cutoff", "leakage", "re": [...], "im": [...]}
//             density entries are row-major
//   gaussian  {"X": [...], "sigma": [[...], ...]}
//   report    {"value": v, "diagnostics": {...}}

#include <string>

#include <json.hpp>

#include "nongauss/fock.hpp"
#include "nongauss/gaussian.hpp"

namespace nongauss {

using json = nlohmann::json;

json to_json(const FockStateVector& psi);
json to_json(const DensityMatrix& rho);
json to_json(const GaussianData& g);
json to_json(const MeasureReport& r);

bool is_vector_state(const json& j);
/// ArgumentError for malformed input; the usual state validation applies.
FockStateVector vector_from_json(const json& j);
/// Accepts either kind; vectors become |psi><psi|.
DensityMatrix density_from_json(const json& j);
GaussianData gaussian_from_json(const json& j);
MeasureReport report_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace nongauss
