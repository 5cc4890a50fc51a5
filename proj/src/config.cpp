#include "tourney/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "tourney/dist_json.hpp"
#include "tourney/errors.hpp"

namespace tourney {
namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + " must be a number");
  return v.get<double>();
}

std::size_t count(const json& v, const std::string& where) {
  if (!v.is_number_unsigned()) throw ConfigError(where + " must be a nonnegative integer");
  return v.get<std::size_t>();
}

}  // namespace

NoiseDistribution ScenarioConfig::noise() const { return distribution_from_json(distribution); }

CostFunction ScenarioConfig::cost() const { return CostFunction::power(kappa, beta); }

std::optional<PrizeSchedule> ScenarioConfig::schedule() const {
  if (prizes_label == "optimal") return std::nullopt;
  if (prizes_label == "wta") return PrizeSchedule::winner_take_all(players);
  if (prizes_label == "eps") return PrizeSchedule::equal_sharing(players);
  PrizeSchedule v(*prizes);
  if (v.players() != players) throw ConfigError("prize list length differs from players");
  return v;
}

ScenarioConfig parse_config(const json& doc) {
  only_keys(doc, {"distribution", "players", "prizes", "threshold", "cost", "effort", "monte_carlo",
                  "verify", "output"},
            "config");
  ScenarioConfig cfg;
  if (!doc.contains("distribution")) throw ConfigError("config needs a distribution");
  cfg.distribution = doc["distribution"];
  cfg.noise();

  if (doc.contains("players")) {
    cfg.players = static_cast<int>(count(doc["players"], "players"));
    if (cfg.players < 2) throw ConfigError("players must be at least 2");
  }
  if (doc.contains("prizes")) {
    const json& p = doc["prizes"];
    if (p.is_string()) {
      cfg.prizes_label = p.get<std::string>();
      if (cfg.prizes_label != "optimal" && cfg.prizes_label != "wta" && cfg.prizes_label != "eps") {
        throw ConfigError("prizes must be 'optimal', 'wta', 'eps' or a list");
      }
    } else if (p.is_array()) {
      std::vector<double> v;
      for (const json& x : p) v.push_back(number(x, "prizes entry"));
      cfg.prizes = std::move(v);
      cfg.prizes_label = "custom";
      cfg.schedule();
    } else {
      throw ConfigError("prizes must be 'optimal', 'wta', 'eps' or a list");
    }
  }
  if (doc.contains("threshold")) {
    const json& t = doc["threshold"];
    if (t.is_string()) {
      if (t.get<std::string>() != "optimal") throw ConfigError("threshold must be 'optimal' or a number");
    } else {
      cfg.threshold = number(t, "threshold");
    }
  }
  if (doc.contains("cost")) {
    only_keys(doc["cost"], {"kappa", "beta"}, "cost");
    if (doc["cost"].contains("kappa")) cfg.kappa = number(doc["cost"]["kappa"], "cost.kappa");
    if (doc["cost"].contains("beta")) cfg.beta = number(doc["cost"]["beta"], "cost.beta");
    cfg.cost();
  }
  if (doc.contains("effort")) cfg.effort = number(doc["effort"], "effort");
  if (doc.contains("monte_carlo")) {
    const json& mc = doc["monte_carlo"];
    only_keys(mc, {"draws", "seed", "workers", "grid"}, "monte_carlo");
    if (mc.contains("draws")) cfg.monte_carlo.draws = count(mc["draws"], "monte_carlo.draws");
    if (mc.contains("seed")) cfg.monte_carlo.seed = count(mc["seed"], "monte_carlo.seed");
    if (mc.contains("workers")) cfg.monte_carlo.workers = count(mc["workers"], "monte_carlo.workers");
    if (mc.contains("grid")) cfg.monte_carlo.grid = count(mc["grid"], "monte_carlo.grid");
  }
  if (doc.contains("verify")) {
    const json& v = doc["verify"];
    only_keys(v, {"bounds", "schemes"}, "verify");
    if (v.contains("bounds")) {
      if (!v["bounds"].is_boolean()) throw ConfigError("verify.bounds must be true or false");
      cfg.check_bounds = v["bounds"].get<bool>();
    }
    if (v.contains("schemes")) cfg.schemes = static_cast<int>(count(v["schemes"], "verify.schemes"));
  }
  if (doc.contains("output")) {
    only_keys(doc["output"], {"directory"}, "output");
    if (doc["output"].contains("directory")) {
      if (!doc["output"]["directory"].is_string()) throw ConfigError("output.directory must be a string");
      cfg.output_directory = doc["output"]["directory"].get<std::string>();
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  if (const char* env = std::getenv("TOURNEY_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("TOURNEY_SEED must be a nonnegative integer");
  }
  throw SeedRequired("Monte-Carlo runs need a seed: set monte_carlo.seed, --seed or TOURNEY_SEED");
}

}  // namespace tourney
