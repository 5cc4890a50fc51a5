#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "tourney/dist.hpp"
#include "tourney/oracle.hpp"

namespace tourney {

/// Tullock contest with a standard, in multiplicative units: e_i = exp(e^_i),
/// rho = exp(rho^).
struct TullockConfig {
  int n = 2;
  double rho = 1.0;
  std::vector<double> efforts;
};

/// p~_i = (e_i / sum e) (1 - exp(-sum e / rho)). AllZeroEfforts when sum e = 0.
double tullock_csf_with_standard(const TullockConfig& cfg, int i);

/// Probability that nobody wins: exp(-sum e / rho).
double tullock_no_winner(const TullockConfig& cfg);

struct TullockOptimum {
  double effort = 0.0;
  double standard = 0.0;
};

/// Optimal symmetric effort and standard under linear cost and a unit prize:
/// e* = (n-1)/n^2 + exp(-n)/n^2, rho* = e*.
TullockOptimum tullock_optimal(int n);

/// Symmetric equilibrium effort for a given standard, from the first-order
/// condition (n-1)(1 - exp(-ne/rho))/(n^2 e) + exp(-ne/rho)/(n rho) = 1.
/// Returns 0 when the condition has no positive root (rho >= 1).
double tullock_equilibrium_effort(int n, double rho);

/// Numeric root of the first-order condition with rho = e imposed.
double tullock_self_consistent_effort(int n);

/// Monte-Carlo best-response check of the Tullock contest through its
/// additive form: Gumbel noise, log efforts, cost exp(e^). The rivals play
/// `rival_effort` and the standard is `rho` (both multiplicative). The grid
/// covers (0, 1] in multiplicative effort.
BestResponseReport tullock_verify(int n, double rival_effort, double rho, std::size_t grid_size,
                                  const MonteCarloOptions& mc);

/// Idea-quality distribution of a Fullerton-McAfee innovation contest.
struct IdeaDistribution {
  std::function<double(double)> cdf;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  /// Optional closed-form inverse; bisection is used otherwise.
  std::function<double(double)> inverse;
};

/// H^{-1}(u), by the supplied inverse or bisection to 1e-12.
double idea_quantile(const IdeaDistribution& h, double u);

/// rho* = H^{-1}(exp(-1/e*)) with e* from tullock_optimal(n).
double fm_optimal_standard(const IdeaDistribution& h, int n);

/// Win probability (e_i / sum e)(1 - H(rho)^{sum e}) in the innovation contest.
double fm_csf(const IdeaDistribution& h, double rho, const std::vector<double>& efforts, int i);

/// Optimal patent-race deadline tau* = exp(-x^_m) / e*.
double patent_race_deadline(const NoiseDistribution& d_hat, double effort);

}  // namespace tourney
