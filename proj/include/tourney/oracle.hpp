#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tourney/dist.hpp"
#include "tourney/equilibrium.hpp"

namespace tourney {

struct MonteCarloOptions {
  std::size_t draws = 1'000'000;
  /// Required; simulations without a seed raise SeedRequired.
  std::optional<std::uint64_t> seed;
  /// 0 uses every hardware thread. Results do not depend on this value.
  std::size_t workers = 0;
};

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
};

struct SimulationReport {
  std::size_t draws = 0;
  std::uint64_t seed = 0;
  /// P^(r): prize of at least v_r, r = 1..n.
  std::vector<Estimate> at_least;
  /// p^(r): exactly rank r among qualifiers.
  std::vector<Estimate> exact;
  /// Fraction of all players (deviator and rivals) passing the standard.
  Estimate pass_fraction;
};

/// Simulates tournaments with player 0 at `effort` and n-1 rivals at
/// `rival_effort`. Qualifiers are ranked by performance; exact ties go to the
/// lower player index.
SimulationReport simulate_prize_probabilities(const NoiseDistribution& d,
                                              const TournamentDesign& design, double effort,
                                              double rival_effort, const MonteCarloOptions& mc);

/// A deviating player's payoff curve on an effort grid. All grid points share
/// the same noise draws (common random numbers).
struct PayoffCurveRequest {
  NoiseDistribution noise;
  PrizeSchedule prizes;
  double standard = 0.0;
  double rival_effort = 0.0;
  /// Efforts in the additive units of performance e + X.
  std::vector<double> efforts;
  /// Index into `efforts` that gaps are measured against.
  std::size_t reference = 0;
  std::function<double(double)> cost;
};

struct PayoffCurve {
  std::vector<double> efforts;
  std::vector<double> payoffs;
  /// payoffs[k] - payoffs[reference] and its paired standard error.
  std::vector<double> gaps;
  std::vector<double> gap_errors;
  std::size_t reference = 0;
  std::size_t draws = 0;
  std::uint64_t seed = 0;
};

PayoffCurve estimate_payoff_curve(const PayoffCurveRequest& request, const MonteCarloOptions& mc);

struct BestResponseReport {
  PayoffCurve curve;
  /// max_k gaps[k]: the best payoff improvement over playing the rivals' effort.
  double gap = 0.0;
  double gap_error = 0.0;
  double best_effort = 0.0;
  /// Half the payoff change between the reference effort and its grid neighbours.
  double grid_bias = 0.0;
  /// gap <= 3 * gap_error + grid_bias
  bool certified = false;
};

/// Summarizes a payoff curve into a best-response certificate.
BestResponseReport certify_best_response(PayoffCurve curve);

/// Estimates pi(e, e*; rho) on `grid_size` points of [0, e-bar] plus e* itself
/// and certifies e* as a best response when no grid point beats it by more
/// than the statistical and grid allowance.
BestResponseReport verify_best_response(const NoiseDistribution& d, const TournamentDesign& design,
                                        double rival_effort, std::size_t grid_size,
                                        const MonteCarloOptions& mc);

enum class DifferenceSource { quadrature, monte_carlo };

struct MarginalCheck {
  std::vector<double> finite_difference;  ///< dP^(r)/de at e = e*, r = 1..n
  std::vector<double> analytic;           ///< B_r(rho - e*)
};

/// Central differences of P^(r) in the deviator's effort at e = e*; one-sided
/// when the threshold rho - e* sits within `step` of a support edge.
MarginalCheck finite_difference_marginals(const NoiseDistribution& d,
                                          const TournamentDesign& design, double rival_effort,
                                          double step,
                                          DifferenceSource source = DifferenceSource::quadrature,
                                          const MonteCarloOptions& mc = {});

struct ConcavityDiagnostic {
  bool unimodal = true;
  int sign_changes = 0;
  std::vector<double> efforts;
  std::vector<double> payoffs;
  double reference_payoff = 0.0;  ///< pi(e*, e*)
  double max_gain = 0.0;          ///< max over the grid of pi(e, e*) - pi(e*, e*)
  double best_effort = 0.0;
  /// unimodal and no grid effort beats e* by more than 1e-8.
  bool ok = true;
};

/// Samples the deviation payoff (by quadrature) on [0, e-bar] and checks that
/// its discrete differences change sign at most once, from + to -, and that
/// the peak sits at the rivals' effort.
ConcavityDiagnostic concavity_diagnostic(const NoiseDistribution& d,
                                         const TournamentDesign& design, double rival_effort,
                                         int points = 400);

}  // namespace tourney
