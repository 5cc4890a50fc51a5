#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tourney/dist.hpp"
#include "tourney/equilibrium.hpp"

namespace tourney {

struct MonteCarloSettings {
  std::size_t draws = 1'000'000;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 0;
  std::size_t grid = 200;
};

/// A scenario file. Every key is optional except `distribution`; unknown keys
/// anywhere are rejected with ConfigError.
///
///   {
///     "distribution": {"family": "exponential", "params": {"rate": 1}},
///     "players": 2,
///     "prizes": "optimal" | "wta" | "eps" | [v_1, ..., v_n],
///     "threshold": "optimal" | t,
///     "cost": {"kappa": 1, "beta": 2},
///     "effort": e,
///     "monte_carlo": {"draws": 1000000, "seed": 7, "workers": 0, "grid": 200},
///     "verify": {"bounds": false, "schemes": 50},
///     "output": {"directory": "out"}
///   }
struct ScenarioConfig {
  nlohmann::json distribution;
  int players = 2;
  /// Empty means "optimal".
  std::optional<std::vector<double>> prizes;
  std::string prizes_label = "optimal";
  std::optional<double> threshold;
  double kappa = 1.0;
  double beta = 2.0;
  /// Rivals' effort for verification; defaults to the solved equilibrium.
  std::optional<double> effort;
  MonteCarloSettings monte_carlo;
  bool check_bounds = false;
  int schemes = 50;
  std::string output_directory;

  NoiseDistribution noise() const;
  CostFunction cost() const;
  /// The fixed schedule, or nullopt when prizes are "optimal".
  std::optional<PrizeSchedule> schedule() const;
};

ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::string& path);

/// The seed from the config, else TOURNEY_SEED, else SeedRequired.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed);

}  // namespace tourney
