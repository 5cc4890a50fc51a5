#pragma once

#include <json.hpp>

#include "tourney/dist.hpp"

namespace tourney {

/// Reads `{"family": ..., "params": {...}}` or
/// `{"family": "piecewise_linear", "knots": [[x, f], ...]}`.
/// Unknown keys and parameters are rejected with InvalidDistribution.
NoiseDistribution distribution_from_json(const nlohmann::json& spec);

nlohmann::json distribution_to_json(const NoiseDistribution& d);

}  // namespace tourney
