#pragma once

// JSON document form of a PotentialSpec:
//   {"family": "<name>", "params": {...}, "t": <number>}
// with optional "sign" (+1/-1) and "shift" keys for transformed specs.
// Parameter keys per family:
//   one-soliton       eta
//   two-soliton       eta1, eta2, eps1, eps2
//   n-soliton         etas, d0s (d0s optional: centred default)
//   periodic-one-gap  a, b, c
//   periodic-cn       m, a
//   combined          alpha, beta, eta
//   constant          value, period (optional)

#include "json.hpp"
#include "zeromode/potentials.hpp"

namespace zeromode {

nlohmann::json to_json(const PotentialSpec& spec);

/// Throws ParameterError on missing or malformed fields, and whatever the
/// family constructor throws on invalid values.
PotentialSpec spec_from_json(const nlohmann::json& doc);

}  // namespace zeromode
