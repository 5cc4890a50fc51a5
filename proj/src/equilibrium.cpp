#include "tourney/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include "tourney/errors.hpp"
#include "tourney/oracle.hpp"
#include "tourney/parallel.hpp"

namespace tourney {

// ---------------------------------------------------------------------------
// PrizeSchedule

PrizeSchedule::PrizeSchedule(std::vector<double> prizes) : prizes_(std::move(prizes)) {
  if (prizes_.empty()) throw InvalidSchedule("prize schedule: need at least one prize");
  double total = 0.0;
  for (std::size_t r = 0; r < prizes_.size(); ++r) {
    if (!std::isfinite(prizes_[r]) || prizes_[r] < 0.0) {
      throw InvalidSchedule("prize schedule: prizes must be finite and nonnegative");
    }
    if (r > 0 && prizes_[r] > prizes_[r - 1] + 1e-12) {
      throw InvalidSchedule("prize schedule: prizes must be weakly decreasing in rank");
    }
    total += prizes_[r];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "prize schedule: budget invariant violated, prizes sum to " << total << " instead of 1";
    throw InvalidSchedule(msg.str());
  }
}

PrizeSchedule PrizeSchedule::winner_take_all(int n) { return top_equal(1, n); }

PrizeSchedule PrizeSchedule::equal_sharing(int n) { return top_equal(n, n); }

PrizeSchedule PrizeSchedule::top_equal(int s, int n) {
  if (n < 1 || s < 1 || s > n) throw InvalidSchedule("top_equal: need 1 <= s <= n");
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  std::fill(v.begin(), v.begin() + s, 1.0 / s);
  return PrizeSchedule(std::move(v));
}

PrizeSchedule PrizeSchedule::from_differentials(std::span<const double> differentials) {
  std::vector<double> v(differentials.size());
  double acc = 0.0;
  for (std::size_t r = differentials.size(); r-- > 0;) {
    acc += differentials[r];
    v[r] = acc;
  }
  return PrizeSchedule(std::move(v));
}

double PrizeSchedule::prize(int r) const {
  if (r < 1) throw RankOutOfRange("prize: rank must be >= 1");
  return r > players() ? 0.0 : prizes_[static_cast<std::size_t>(r - 1)];
}

std::vector<double> PrizeSchedule::differentials() const {
  std::vector<double> d(prizes_.size());
  for (std::size_t r = 0; r < prizes_.size(); ++r) {
    d[r] = prizes_[r] - (r + 1 < prizes_.size() ? prizes_[r + 1] : 0.0);
  }
  return d;
}

// ---------------------------------------------------------------------------
// CostFunction

CostFunction CostFunction::power(double kappa, double beta) {
  if (!(kappa > 0.0) || !(beta > 1.0) || !std::isfinite(kappa) || !std::isfinite(beta)) {
    throw InvalidCost("power cost: need kappa > 0 and beta > 1");
  }
  CostFunction c;
  c.cost_ = [=](double e) { return kappa * std::pow(e, beta) / beta; };
  c.marginal_ = [=](double e) { return kappa * std::pow(e, beta - 1.0); };
  c.inverse_marginal_ = [=](double y) { return std::pow(y / kappa, 1.0 / (beta - 1.0)); };
  c.max_effort_ = std::pow(beta / kappa, 1.0 / beta);
  std::ostringstream desc;
  desc << "power(kappa=" << kappa << ", beta=" << beta << ")";
  c.description_ = desc.str();
  return c;
}

CostFunction CostFunction::custom(std::function<double(double)> cost,
                                  std::function<double(double)> marginal,
                                  std::function<double(double)> inverse_marginal) {
  if (!cost || !marginal || !inverse_marginal) throw InvalidCost("custom cost: missing callable");
  if (std::abs(cost(0.0)) > 1e-12 || std::abs(marginal(0.0)) > 1e-12) {
    throw InvalidCost("custom cost: need c(0) = c'(0) = 0");
  }
  double hi = 1.0;
  for (int i = 0; i < 200 && cost(hi) < 1.0; ++i) hi *= 2.0;
  if (!(cost(hi) >= 1.0)) throw InvalidCost("custom cost: c never reaches the unit budget");
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cost(mid) < 1.0 ? lo : hi) = mid;
  }
  CostFunction c;
  c.cost_ = std::move(cost);
  c.marginal_ = std::move(marginal);
  c.inverse_marginal_ = std::move(inverse_marginal);
  c.max_effort_ = 0.5 * (lo + hi);
  c.description_ = "custom";
  return c;
}

// ---------------------------------------------------------------------------
// Marginal benefits

namespace {

void check_rank(int n, int r) {
  if (n < 1 || r < 1 || r > n) {
    std::ostringstream msg;
    msg << "rank " << r << " outside 1.." << n;
    throw RankOutOfRange(msg.str());
  }
}

std::vector<double> shifted_breaks(const NoiseDistribution& d, double shift) {
  std::vector<double> out(d.integration_breaks().begin(), d.integration_breaks().end());
  for (double k : d.integration_breaks()) out.push_back(k - shift);
  const Support s = d.support();
  if (std::isfinite(s.lower)) out.push_back(s.lower - shift);
  if (std::isfinite(s.upper)) out.push_back(s.upper - shift);
  return out;
}

}  // namespace

double marginal_benefit_rank(const NoiseDistribution& d, int n, int r, double t,
                             const QuadratureOptions& quad) {
  check_rank(n, r);
  if (r == n) return d.pdf(t);
  const int j = n - r;
  const int m = n - 1;
  const double ft = d.pdf(t);
  const double head = ft > 0.0 ? ft * order_statistic_cdf(d, j, m, t) : 0.0;
  const Support s = d.truncated_support();
  const double a = std::max(t, s.lower);
  if (!(a < s.upper)) return head;
  auto integrand = [&](double x) { return d.pdf(x) * order_statistic_pdf(d, j, m, x); };
  return head + integrate(integrand, a, s.upper, d.integration_breaks(), quad).value;
}

double total_marginal_benefit(const NoiseDistribution& d, const PrizeSchedule& v, double t,
                              const QuadratureOptions& quad) {
  const std::vector<double> diffs = v.differentials();
  double g = 0.0;
  for (int r = 1; r <= v.players(); ++r) {
    const double dr = diffs[static_cast<std::size_t>(r - 1)];
    if (dr != 0.0) g += marginal_benefit_rank(d, v.players(), r, t, quad) * dr;
  }
  return g;
}

std::vector<double> total_marginal_benefit_curve(const NoiseDistribution& d, const PrizeSchedule& v,
                                                 std::span<const double> ts,
                                                 const QuadratureOptions& quad) {
  std::vector<double> out(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) { out[i] = total_marginal_benefit(d, v, ts[i], quad); });
  return out;
}

double prize_probability(const NoiseDistribution& d, int n, int r, double effort,
                         double rival_effort, double standard, const QuadratureOptions& quad) {
  check_rank(n, r);
  const double pass = d.survival(standard - effort);
  if (r == n) return pass;
  const int j = n - r;
  const int m = n - 1;
  const double t = standard - rival_effort;
  const double shift = rival_effort - effort;
  const double head = pass > 0.0 ? pass * order_statistic_cdf(d, j, m, t) : 0.0;
  const Support s = d.truncated_support();
  const double a = std::max(t, s.lower);
  if (!(a < s.upper)) return head;
  auto integrand = [&](double x) { return d.survival(shift + x) * order_statistic_pdf(d, j, m, x); };
  const std::vector<double> breaks = shifted_breaks(d, shift);
  return head + integrate(integrand, a, s.upper, breaks, quad).value;
}

double deviation_payoff(const NoiseDistribution& d, const TournamentDesign& design, double effort,
                        double rival_effort, const QuadratureOptions& quad) {
  const std::vector<double> diffs = design.prizes.differentials();
  const int n = design.players();
  double reward = 0.0;
  for (int r = 1; r <= n; ++r) {
    const double dr = diffs[static_cast<std::size_t>(r - 1)];
    if (dr != 0.0) reward += dr * prize_probability(d, n, r, effort, rival_effort, design.standard, quad);
  }
  return reward - design.cost(effort);
}

double equilibrium_effort(const NoiseDistribution& d, const PrizeSchedule& v, double t,
                          const CostFunction& c, const QuadratureOptions& quad) {
  const double g = total_marginal_benefit(d, v, t, quad);
  const double cap = c.marginal(c.max_effort());
  if (g > cap * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "equilibrium_effort: marginal benefit " << g << " exceeds c'(e-bar) = " << cap;
    throw EffortOutOfRange(msg.str());
  }
  if (g <= 0.0) return 0.0;
  return std::min(c.inverse_marginal(g), c.max_effort());
}

// ---------------------------------------------------------------------------
// Optimal standard

namespace {

// Best (t, value) among candidates; values within tol tie and the lowest t wins.
std::pair<double, double> lowest_argmax(std::span<const std::pair<double, double>> points, double tol) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) best = std::max(best, p.second);
  double t = std::numeric_limits<double>::infinity();
  double value = best;
  for (const auto& p : points) {
    if (p.second >= best - tol && p.first < t) {
      t = p.first;
      value = p.second;
    }
  }
  return {t, value};
}

std::vector<double> modes_above_global(const ShapeReport& shape) {
  std::vector<double> out;
  for (const Mode& m : shape.modes) {
    if (m.x >= shape.global_mode) out.push_back(m.x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ThresholdResult optimal_threshold(const NoiseDistribution& d, const PrizeSchedule& v,
                                  const ThresholdOptions& options) {
  const ShapeReport shape = find_modes(d, options.shape);
  ThresholdResult result;
  for (double m : modes_above_global(shape)) {
    result.candidates.emplace_back(m, total_marginal_benefit(d, v, m, options.quad));
  }
  std::tie(result.threshold, result.marginal_benefit) =
      lowest_argmax(result.candidates, options.tie_tol);

  if (options.cross_validate) {
    ShapeOptions grid_options = options.shape;
    grid_options.grid_fraction = options.grid_fraction;
    const std::vector<double> grid = shape_grid(d, grid_options);
    const std::vector<double> g = total_marginal_benefit_curve(d, v, grid, options.quad);
    std::vector<std::pair<double, double>> points(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) points[i] = {grid[i], g[i]};
    std::tie(result.grid_threshold, result.grid_marginal_benefit) =
        lowest_argmax(points, options.tie_tol);
    result.grid_step = d.truncated_support(options.shape.tail).width() * options.grid_fraction;
    result.cross_validated = true;
  }
  return result;
}

EquilibriumSolution solve_at_threshold(const NoiseDistribution& d, const PrizeSchedule& v, double t,
                                       const CostFunction& c, const SolveOptions& options) {
  EquilibriumSolution sol;
  sol.threshold = t;
  sol.marginal_benefit = total_marginal_benefit(d, v, t, options.threshold.quad);
  const double cap = c.marginal(c.max_effort());
  if (sol.marginal_benefit > cap * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "equilibrium_effort: marginal benefit " << sol.marginal_benefit
        << " exceeds c'(e-bar) = " << cap;
    throw EffortOutOfRange(msg.str());
  }
  sol.effort = sol.marginal_benefit > 0.0 ? c.inverse_marginal(sol.marginal_benefit) : 0.0;
  sol.standard = sol.effort + sol.threshold;
  sol.pass_probability = d.survival(t);
  for (const std::string& w : d.warnings()) sol.warnings.push_back(w);

  if (options.check_concavity) {
    const TournamentDesign design{sol.standard, v, c};
    const ConcavityDiagnostic diag =
        concavity_diagnostic(d, design, sol.effort, options.concavity_points);
    sol.concavity_ok = diag.ok;
    if (!diag.ok) {
      std::ostringstream msg;
      msg << "ConcavityWarning: ";
      if (!diag.unimodal) {
        msg << "deviation payoff is not unimodal on [0, e-bar] (" << diag.sign_changes << " sign changes)";
      } else {
        msg << "deviating to e = " << diag.best_effort << " gains " << diag.max_gain;
      }
      msg << "; the first-order point is not an equilibrium";
      sol.warnings.push_back(msg.str());
    }
  }
  return sol;
}

EquilibriumSolution solve_design(const NoiseDistribution& d, const PrizeSchedule& v,
                                 const CostFunction& c, const SolveOptions& options) {
  ThresholdResult search = optimal_threshold(d, v, options.threshold);
  EquilibriumSolution sol = solve_at_threshold(d, v, search.threshold, c, options);
  if (search.cross_validated &&
      search.grid_marginal_benefit > search.marginal_benefit + 1e-9) {
    std::ostringstream msg;
    msg << "grid scan found g = " << search.grid_marginal_benefit << " at t = "
        << search.grid_threshold << " above the best mode value " << search.marginal_benefit;
    sol.warnings.push_back(msg.str());
  }
  sol.search = std::move(search);
  return sol;
}

SufficiencyResult global_mode_sufficiency(const NoiseDistribution& d, int n,
                                          const ThresholdOptions& options) {
  const ShapeReport shape = find_modes(d, options.shape);
  const PrizeSchedule wta = PrizeSchedule::winner_take_all(n);
  SufficiencyResult result;
  result.global_mode = shape.global_mode;
  for (double m : modes_above_global(shape)) {
    result.mode_values.emplace_back(m, marginal_benefit_rank(d, n, 1, m, options.quad));
  }
  result.witness = lowest_argmax(result.mode_values, options.tie_tol).first;
  result.holds = result.witness == shape.global_mode;

  if (options.cross_validate) {
    ShapeOptions grid_options = options.shape;
    grid_options.grid_fraction = options.grid_fraction;
    const std::vector<double> grid = shape_grid(d, grid_options);
    const std::vector<double> g = total_marginal_benefit_curve(d, wta, grid, options.quad);
    std::vector<std::pair<double, double>> points(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) points[i] = {grid[i], g[i]};
    std::tie(result.grid_argmax, result.grid_max) = lowest_argmax(points, options.tie_tol);
  }
  return result;
}

}  // namespace tourney
