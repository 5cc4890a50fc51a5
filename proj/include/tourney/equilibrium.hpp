#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tourney/dist.hpp"
#include "tourney/quadrature.hpp"

namespace tourney {

/// A point of the prize simplex: v_1 >= ... >= v_n >= 0 with sum 1.
class PrizeSchedule {
 public:
  /// Throws InvalidSchedule naming the violated invariant.
  explicit PrizeSchedule(std::vector<double> prizes);

  static PrizeSchedule winner_take_all(int n);
  static PrizeSchedule equal_sharing(int n);
  /// s equal prizes 1/s at the top, zero below.
  static PrizeSchedule top_equal(int s, int n);
  /// Inverse of differentials(): v_r = sum_{k >= r} d_k.
  static PrizeSchedule from_differentials(std::span<const double> differentials);

  int players() const { return static_cast<int>(prizes_.size()); }
  std::span<const double> prizes() const { return prizes_; }
  /// Prize for rank r, 1-based; zero for r > n.
  double prize(int r) const;
  /// d_r = v_r - v_{r+1} with v_{n+1} = 0.
  std::vector<double> differentials() const;

 private:
  std::vector<double> prizes_;
};

/// Strictly convex effort cost with c(0) = c'(0) = 0.
class CostFunction {
 public:
  /// c(e) = kappa * e^beta / beta with kappa > 0, beta > 1.
  static CostFunction power(double kappa = 1.0, double beta = 2.0);
  /// User-supplied cost, marginal cost, and inverse marginal cost.
  static CostFunction custom(std::function<double(double)> cost,
                             std::function<double(double)> marginal,
                             std::function<double(double)> inverse_marginal);

  double operator()(double e) const { return cost_(e); }
  double marginal(double e) const { return marginal_(e); }
  double inverse_marginal(double y) const { return inverse_marginal_(y); }
  /// e-bar = c^{-1}(1), the largest undominated effort under a unit budget.
  double max_effort() const { return max_effort_; }
  std::string describe() const { return description_; }

 private:
  CostFunction() = default;
  std::function<double(double)> cost_;
  std::function<double(double)> marginal_;
  std::function<double(double)> inverse_marginal_;
  double max_effort_ = 0.0;
  std::string description_;
};

struct TournamentDesign {
  double standard;
  PrizeSchedule prizes;
  CostFunction cost;

  int players() const { return prizes.players(); }
};

/// B_r(t) = f(t) F_(n-r:n-1)(t) + int_{x>t} f(x) dF_(n-r:n-1)(x), the marginal
/// effect of effort on the chance of winning at least prize r when the
/// standard sits at noise level t. B_n(t) = f(t).
double marginal_benefit_rank(const NoiseDistribution& d, int n, int r, double t,
                             const QuadratureOptions& quad = {});

/// g(t; v) = sum_r B_r(t) (v_r - v_{r+1}).
double total_marginal_benefit(const NoiseDistribution& d, const PrizeSchedule& v, double t,
                              const QuadratureOptions& quad = {});

/// g(t; v) at every t, evaluated in parallel.
std::vector<double> total_marginal_benefit_curve(const NoiseDistribution& d, const PrizeSchedule& v,
                                                 std::span<const double> ts,
                                                 const QuadratureOptions& quad = {});

/// P^(r)(e, e*; rho): probability that a player exerting e against n-1 rivals
/// at e* passes rho and wins at least prize r.
double prize_probability(const NoiseDistribution& d, int n, int r, double effort,
                         double rival_effort, double standard, const QuadratureOptions& quad = {});

/// Expected payoff sum_r P^(r) (v_r - v_{r+1}) - c(e) of a deviating player.
double deviation_payoff(const NoiseDistribution& d, const TournamentDesign& design, double effort,
                        double rival_effort, const QuadratureOptions& quad = {});

/// e* = c'^{-1}(g(t; v)). Throws EffortOutOfRange if g exceeds c'(e-bar).
double equilibrium_effort(const NoiseDistribution& d, const PrizeSchedule& v, double t,
                          const CostFunction& c, const QuadratureOptions& quad = {});

struct ThresholdOptions {
  ShapeOptions shape;
  /// Grid spacing of the full-support cross-check, as a fraction of the support width.
  double grid_fraction = 2e-4;
  bool cross_validate = true;
  /// Candidate modes whose g differs by less than this are ties; the lowest wins.
  double tie_tol = 1e-9;
  QuadratureOptions quad;
};

struct ThresholdResult {
  double threshold = 0.0;
  double marginal_benefit = 0.0;
  /// (mode, g(mode; v)) for every mode weakly above the global mode.
  std::vector<std::pair<double, double>> candidates;
  bool cross_validated = false;
  double grid_threshold = 0.0;
  double grid_marginal_benefit = 0.0;
  double grid_step = 0.0;
};

/// Maximizes g(.; v) over the modes at or above the global mode, and checks
/// the answer against a scan of the whole support.
ThresholdResult optimal_threshold(const NoiseDistribution& d, const PrizeSchedule& v,
                                  const ThresholdOptions& options = {});

struct EquilibriumSolution {
  double threshold = 0.0;         ///< t*, noise units
  double effort = 0.0;            ///< e*
  double standard = 0.0;          ///< rho* = e* + t*
  double marginal_benefit = 0.0;  ///< g(t*; v) = c'(e*)
  double pass_probability = 0.0;  ///< 1 - F(t*)
  bool concavity_ok = true;
  std::optional<ThresholdResult> search;
  std::vector<std::string> warnings;
};

struct SolveOptions {
  ThresholdOptions threshold;
  bool check_concavity = true;
  int concavity_points = 400;
};

/// Optimal standard and equilibrium effort for a fixed schedule. A failed
/// concavity diagnostic is reported through concavity_ok and warnings.
EquilibriumSolution solve_design(const NoiseDistribution& d, const PrizeSchedule& v,
                                 const CostFunction& c, const SolveOptions& options = {});

/// Same as solve_design but with the noise threshold t fixed by the caller.
EquilibriumSolution solve_at_threshold(const NoiseDistribution& d, const PrizeSchedule& v,
                                       double t, const CostFunction& c,
                                       const SolveOptions& options = {});

struct SufficiencyResult {
  bool holds = false;
  double global_mode = 0.0;
  /// Mode that maximizes B_1 (equals global_mode when holds).
  double witness = 0.0;
  std::vector<std::pair<double, double>> mode_values;
  double grid_argmax = 0.0;
  double grid_max = 0.0;
};

/// Whether B_1 = g(.; WTA) peaks at the global mode, in which case every
/// schedule's optimal standard sits at the global mode.
SufficiencyResult global_mode_sufficiency(const NoiseDistribution& d, int n,
                                          const ThresholdOptions& options = {});

}  // namespace tourney
