#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tourney/dist.hpp"
#include "tourney/equilibrium.hpp"
#include "tourney/oracle.hpp"

namespace tourney {

/// A cardinal pay scheme w(y): given the output vector y it writes every
/// player's payment into `pay`. This single callback is the plugin interface.
struct PayScheme {
  using Rule = std::function<void(std::span<const double> y, std::span<double> pay)>;

  int players = 0;
  std::string name;
  Rule rule;

  std::vector<double> payments(std::span<const double> y) const;
  double payment(std::span<const double> y, int i) const;
};

struct PropertyCheckOptions {
  int trials = 200;
  std::uint64_t seed = 1;
  double tolerance = 1e-12;
};

/// Spot-checks anonymity, monotonicity, nonnegativity and the unit budget on
/// outputs y = e + X drawn from d. Throws PropertyViolation naming the failure.
void check_properties(const PayScheme& w, const NoiseDistribution& d, double effort,
                      const PropertyCheckOptions& options = {});

/// Ranks outputs at or above the standard and pays v by rank; exact ties go
/// to the lower index.
PayScheme tournament_as_payscheme(const TournamentDesign& design);
PayScheme tournament_as_payscheme(const PrizeSchedule& prizes, double standard);

/// w_i = max(y_i - k, 0) / max(sum_j max(y_j - k, 0), floor).
PayScheme capped_linear_sharing(int n, double kink, double floor);

/// weight * a + (1 - weight) * b.
PayScheme mix(const PayScheme& a, const PayScheme& b, double weight);

/// Uniformly random point of the prize simplex: Dirichlet(1) weights w_r turned
/// into differentials d_r = w_r / r.
PrizeSchedule random_prize_schedule(int n, std::uint64_t seed, std::uint64_t index);

/// Randomized mixtures of rank-contingent tournaments and capped linear
/// sharing, with kinks and standards spread over the central range of e + X.
std::vector<PayScheme> random_scheme_battery(const NoiseDistribution& d, int n, double effort,
                                             int count, std::uint64_t seed);

/// Monte-Carlo estimate of R(e; w) = E[1{X_1 > x_m} w_1(e + X) lambda(X_1)].
/// Needs a density that vanishes at the upper support bound.
Estimate evaluate_R(const NoiseDistribution& d, const PayScheme& w, double effort,
                    const MonteCarloOptions& mc, bool check = true);

struct BoundCheck {
  LogClass log_class = LogClass::neither;
  double bound = 0.0;
  Estimate estimate;
  bool satisfied = false;
};

/// The upper bound on R(e; w): g(x_m; WTA) for log-concave noise, f(lower)/n for
/// log-convex noise; NoBoundAvailable otherwise.
double marginal_benefit_bound(const NoiseDistribution& d, int n, LogClass* log_class = nullptr);

BoundCheck check_bound(const NoiseDistribution& d, const PayScheme& w, double effort,
                       const MonteCarloOptions& mc);

}  // namespace tourney
