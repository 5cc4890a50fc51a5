#include "tourney/dist_json.hpp"

#include <set>

#include "tourney/errors.hpp"

namespace tourney {
namespace {

using nlohmann::json;

double param(const json& params, const std::string& key, double fallback,
             std::set<std::string>& seen) {
  seen.insert(key);
  if (!params.contains(key)) return fallback;
  if (!params.at(key).is_number()) {
    throw InvalidDistribution("distribution param '" + key + "' must be a number");
  }
  return params.at(key).get<double>();
}

}  // namespace

NoiseDistribution distribution_from_json(const json& spec) {
  if (!spec.is_object()) throw InvalidDistribution("distribution spec must be an object");
  for (const auto& [key, _] : spec.items()) {
    if (key != "family" && key != "params" && key != "knots") {
      throw InvalidDistribution("unknown distribution key '" + key + "'");
    }
  }
  if (!spec.contains("family") || !spec.at("family").is_string()) {
    throw InvalidDistribution("distribution spec needs a string 'family'");
  }
  const std::string family = spec.at("family").get<std::string>();

  if (family == "piecewise_linear") {
    if (spec.contains("params")) throw InvalidDistribution("piecewise_linear takes 'knots', not 'params'");
    if (!spec.contains("knots") || !spec.at("knots").is_array()) {
      throw InvalidDistribution("piecewise_linear needs a 'knots' array");
    }
    std::vector<Knot> knots;
    for (const json& k : spec.at("knots")) {
      if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
        throw InvalidDistribution("each knot must be [x, density]");
      }
      knots.push_back({k[0].get<double>(), k[1].get<double>()});
    }
    return NoiseDistribution::piecewise_linear(std::move(knots));
  }
  if (spec.contains("knots")) throw InvalidDistribution("'knots' only applies to piecewise_linear");

  const json params = spec.value("params", json::object());
  if (!params.is_object()) throw InvalidDistribution("'params' must be an object");
  std::set<std::string> seen;
  auto make = [&]() -> NoiseDistribution {
    if (family == "exponential") return NoiseDistribution::exponential(param(params, "rate", 1.0, seen));
    if (family == "gumbel") {
      return NoiseDistribution::gumbel(param(params, "location", 0.0, seen),
                                       param(params, "scale", 1.0, seen));
    }
    if (family == "normal") {
      return NoiseDistribution::normal(param(params, "mean", 0.0, seen), param(params, "sd", 1.0, seen));
    }
    if (family == "logistic") {
      return NoiseDistribution::logistic(param(params, "location", 0.0, seen),
                                         param(params, "scale", 1.0, seen));
    }
    if (family == "uniform") {
      return NoiseDistribution::uniform(param(params, "lower", 0.0, seen),
                                        param(params, "upper", 1.0, seen));
    }
    if (family == "pareto") {
      return NoiseDistribution::pareto(param(params, "shape", 2.0, seen),
                                       param(params, "scale", 1.0, seen));
    }
    if (family == "erf_dfr") return NoiseDistribution::erf_dfr();
    throw InvalidDistribution("unknown distribution family '" + family + "'");
  };
  NoiseDistribution d = make();
  for (const auto& [key, _] : params.items()) {
    if (!seen.count(key)) throw InvalidDistribution("unknown param '" + key + "' for " + family);
  }
  return d;
}

json distribution_to_json(const NoiseDistribution& d) {
  json out{{"family", d.name()}};
  if (d.family() == Family::piecewise_linear) {
    json knots = json::array();
    for (const Knot& k : d.knots()) knots.push_back({k.x, k.density});
    out["knots"] = knots;
    out["normalization_factor"] = d.normalization_factor();
  } else {
    out["params"] = d.params();
  }
  return out;
}

}  // namespace tourney
