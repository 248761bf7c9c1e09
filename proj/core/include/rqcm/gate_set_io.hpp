#pragma once

#include <string>

#include "rqcm/gate_averaging.hpp"

namespace rqcm {

// Gate-set files:
//   { "name": "...", "dagger_symmetric": false,
//     "gates": [ { "weight": 0.5, "matrix": [[[re, im], x4], x4] }, ... ] }
// "dagger_symmetric" is optional. Throws FormatError on malformed input and
// InvalidArgument on non-unitary gates or unnormalized weights.
GateDistribution parse_gate_set(const std::string& json_text);
GateDistribution load_gate_set(const std::string& path);
std::string serialize_gate_set(const GateDistribution& dist);

/// Resolves "haar-u4" or a path to a gate-set file.
GateDistribution resolve_distribution(const std::string& source);

}  // namespace rqcm
