#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tourney/dist.hpp"
#include "tourney/equilibrium.hpp"

namespace tourney {

/// h~(x; t) = f(max{x, t}) / (1 - F(x)).
double modified_hazard(const NoiseDistribution& d, double t, double x);

/// B_r(t) / r. Computed directly from B_r and again as
/// (1/n) * int h~(x; t) dF_(n-r:n)(x); the two must agree to `tolerance`
/// or RepresentationMismatch is thrown.
double rank_score(const NoiseDistribution& d, int n, int r, double t, double tolerance = 1e-7);

/// The modified-hazard representation alone.
double rank_score_by_hazard(const NoiseDistribution& d, int n, int r, double t);

enum class Regime { wta, eps, tie, interior };
std::string to_string(Regime regime);

struct PrizeDesignReport {
  int r_star = 1;
  PrizeSchedule schedule = PrizeSchedule::winner_take_all(1);
  /// B_r(t)/r for r = 1..n.
  std::vector<double> scores;
  Regime regime = Regime::wta;
  /// Every r whose score is within the tie tolerance of the best.
  std::vector<int> tie_set;
  double threshold = 0.0;
};

struct PrizeDesign {
  PrizeDesignReport report;
  EquilibriumSolution solution;
};

struct PrizeOptions {
  /// Fixes the noise threshold t instead of using the global mode.
  std::optional<double> threshold;
  double tie_tol = 1e-9;
  SolveOptions solve;
};

/// Scores and schedule choice at threshold t, without solving for effort.
PrizeDesignReport choose_prizes(const NoiseDistribution& d, int n, double t, double tie_tol = 1e-9);

/// Optimal count of equal prizes r* = argmax_r B_r(x_m)/r and the equilibrium
/// it induces. Without a threshold override the global mode must satisfy the
/// sufficiency condition, else SufficiencyViolated.
PrizeDesign optimal_prizes(const NoiseDistribution& d, int n, const CostFunction& c,
                           const PrizeOptions& options = {});

}  // namespace tourney
