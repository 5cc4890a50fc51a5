#include "tourney/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "tourney/errors.hpp"
#include "tourney/parallel.hpp"
#include "tourney/rng.hpp"

namespace tourney {
namespace {

constexpr std::size_t kBatch = 1 << 14;

std::uint64_t require_seed(const MonteCarloOptions& mc) {
  if (!mc.seed) throw SeedRequired("Monte-Carlo run needs an explicit seed");
  if (mc.draws < 2) throw InvalidInput("Monte-Carlo run needs at least two draws");
  return *mc.seed;
}

std::size_t batch_count(std::size_t draws) { return (draws + kBatch - 1) / kBatch; }

// Fills `noise` with the shocks of draw `k`; player i reads stream i.
void draw_noise(const NoiseDistribution& d, const CounterRng& rng, std::uint64_t k,
                std::vector<double>& noise) {
  for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = d.quantile(rng.uniform(i, k));
}

// Rank of a qualifying performance y0 among qualifying rivals sorted in
// descending order; ties resolve in favour of player 0.
int rank_among(double y0, const std::vector<double>& rivals_desc) {
  int rank = 1;
  for (double y : rivals_desc) {
    if (y > y0) ++rank; else break;
  }
  return rank;
}

Estimate proportion(std::uint64_t hits, std::size_t draws) {
  const double n = static_cast<double>(draws);
  const double p = static_cast<double>(hits) / n;
  return {p, std::sqrt(std::max(0.0, p * (1.0 - p)) * n / (n - 1.0)) / std::sqrt(n)};
}

std::vector<double> linspace(double a, double b, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

}  // namespace

SimulationReport simulate_prize_probabilities(const NoiseDistribution& d,
                                              const TournamentDesign& design, double effort,
                                              double rival_effort, const MonteCarloOptions& mc) {
  const std::uint64_t seed = require_seed(mc);
  const int n = design.players();
  const CounterRng rng(seed);

  struct Tally {
    std::vector<std::uint64_t> at_least;
    std::vector<std::uint64_t> exact;
    std::uint64_t passes = 0;
  };
  std::vector<Tally> tallies(batch_count(mc.draws));
  parallel_for(tallies.size(), [&](std::size_t b) {
    Tally& tally = tallies[b];
    tally.at_least.assign(static_cast<std::size_t>(n), 0);
    tally.exact.assign(static_cast<std::size_t>(n), 0);
    std::vector<double> noise(static_cast<std::size_t>(n));
    std::vector<double> rivals;
    const std::size_t end = std::min(mc.draws, (b + 1) * kBatch);
    for (std::size_t k = b * kBatch; k < end; ++k) {
      draw_noise(d, rng, k, noise);
      rivals.clear();
      for (int i = 1; i < n; ++i) {
        const double y = rival_effort + noise[static_cast<std::size_t>(i)];
        if (y >= design.standard) rivals.push_back(y);
      }
      tally.passes += rivals.size();
      const double y0 = effort + noise[0];
      if (y0 < design.standard) continue;
      ++tally.passes;
      std::sort(rivals.begin(), rivals.end(), std::greater<>());
      const int rank = rank_among(y0, rivals);
      ++tally.exact[static_cast<std::size_t>(rank - 1)];
      for (int r = rank; r <= n; ++r) ++tally.at_least[static_cast<std::size_t>(r - 1)];
    }
  }, mc.workers);

  std::vector<std::uint64_t> at_least(static_cast<std::size_t>(n), 0);
  std::vector<std::uint64_t> exact(static_cast<std::size_t>(n), 0);
  std::uint64_t passes = 0;
  for (const Tally& t : tallies) {
    for (int r = 0; r < n; ++r) {
      at_least[static_cast<std::size_t>(r)] += t.at_least[static_cast<std::size_t>(r)];
      exact[static_cast<std::size_t>(r)] += t.exact[static_cast<std::size_t>(r)];
    }
    passes += t.passes;
  }

  SimulationReport report;
  report.draws = mc.draws;
  report.seed = seed;
  for (int r = 0; r < n; ++r) {
    report.at_least.push_back(proportion(at_least[static_cast<std::size_t>(r)], mc.draws));
    report.exact.push_back(proportion(exact[static_cast<std::size_t>(r)], mc.draws));
  }
  // Each player's pass indicator is a Bernoulli draw; report the pooled mean.
  const double pooled = static_cast<double>(passes) / (static_cast<double>(mc.draws) * n);
  report.pass_fraction = {pooled, std::sqrt(pooled * (1.0 - pooled) / (static_cast<double>(mc.draws) * n))};
  return report;
}

PayoffCurve estimate_payoff_curve(const PayoffCurveRequest& request, const MonteCarloOptions& mc) {
  const std::uint64_t seed = require_seed(mc);
  const std::size_t grid = request.efforts.size();
  if (grid == 0 || request.reference >= grid) throw InvalidInput("payoff curve: bad effort grid");
  if (!request.cost) throw InvalidInput("payoff curve: missing cost");
  const int n = request.prizes.players();
  const CounterRng rng(seed);

  struct Sums {
    std::vector<double> prize;
    std::vector<double> diff;
    std::vector<double> diff_sq;
  };
  std::vector<Sums> sums(batch_count(mc.draws));
  parallel_for(sums.size(), [&](std::size_t b) {
    Sums& s = sums[b];
    s.prize.assign(grid, 0.0);
    s.diff.assign(grid, 0.0);
    s.diff_sq.assign(grid, 0.0);
    std::vector<double> noise(static_cast<std::size_t>(n));
    std::vector<double> rivals;
    std::vector<double> won(grid);
    const std::size_t end = std::min(mc.draws, (b + 1) * kBatch);
    for (std::size_t k = b * kBatch; k < end; ++k) {
      draw_noise(request.noise, rng, k, noise);
      rivals.clear();
      for (int i = 1; i < n; ++i) {
        const double y = request.rival_effort + noise[static_cast<std::size_t>(i)];
        if (y >= request.standard) rivals.push_back(y);
      }
      std::sort(rivals.begin(), rivals.end(), std::greater<>());
      for (std::size_t g = 0; g < grid; ++g) {
        const double y0 = request.efforts[g] + noise[0];
        won[g] = y0 < request.standard ? 0.0 : request.prizes.prize(rank_among(y0, rivals));
      }
      const double base = won[request.reference];
      for (std::size_t g = 0; g < grid; ++g) {
        const double delta = won[g] - base;
        s.prize[g] += won[g];
        s.diff[g] += delta;
        s.diff_sq[g] += delta * delta;
      }
    }
  }, mc.workers);

  std::vector<double> prize(grid, 0.0);
  std::vector<double> diff(grid, 0.0);
  std::vector<double> diff_sq(grid, 0.0);
  for (const Sums& s : sums) {
    for (std::size_t g = 0; g < grid; ++g) {
      prize[g] += s.prize[g];
      diff[g] += s.diff[g];
      diff_sq[g] += s.diff_sq[g];
    }
  }

  const double draws = static_cast<double>(mc.draws);
  PayoffCurve curve;
  curve.efforts = request.efforts;
  curve.reference = request.reference;
  curve.draws = mc.draws;
  curve.seed = seed;
  const double ref_cost = request.cost(request.efforts[request.reference]);
  for (std::size_t g = 0; g < grid; ++g) {
    const double cost = request.cost(request.efforts[g]);
    curve.payoffs.push_back(prize[g] / draws - cost);
    const double mean = diff[g] / draws;
    const double var = std::max(0.0, (diff_sq[g] - draws * mean * mean) / (draws - 1.0));
    curve.gaps.push_back(mean - (cost - ref_cost));
    curve.gap_errors.push_back(std::sqrt(var / draws));
  }
  return curve;
}

BestResponseReport certify_best_response(PayoffCurve curve) {
  BestResponseReport report;
  const std::size_t ref = curve.reference;
  std::size_t best = ref;
  for (std::size_t g = 0; g < curve.gaps.size(); ++g) {
    if (curve.gaps[g] > curve.gaps[best]) best = g;
  }
  report.gap = curve.gaps[best];
  report.gap_error = curve.gap_errors[best];
  report.best_effort = curve.efforts[best];
  double step = 0.0;
  if (ref > 0) step = std::max(step, std::abs(curve.payoffs[ref - 1] - curve.payoffs[ref]));
  if (ref + 1 < curve.payoffs.size()) {
    step = std::max(step, std::abs(curve.payoffs[ref + 1] - curve.payoffs[ref]));
  }
  report.grid_bias = 0.5 * step;
  report.certified = report.gap <= 3.0 * report.gap_error + report.grid_bias;
  report.curve = std::move(curve);
  return report;
}

BestResponseReport verify_best_response(const NoiseDistribution& d, const TournamentDesign& design,
                                        double rival_effort, std::size_t grid_size,
                                        const MonteCarloOptions& mc) {
  if (grid_size < 2) throw InvalidInput("verify_best_response: need at least two grid points");
  std::vector<double> efforts = linspace(0.0, design.cost.max_effort(), grid_size);
  efforts.push_back(rival_effort);
  std::sort(efforts.begin(), efforts.end());
  efforts.erase(std::unique(efforts.begin(), efforts.end()), efforts.end());
  const auto ref = static_cast<std::size_t>(
      std::find(efforts.begin(), efforts.end(), rival_effort) - efforts.begin());

  PayoffCurveRequest request{d, design.prizes, design.standard, rival_effort, std::move(efforts), ref,
                             [cost = design.cost](double e) { return cost(e); }};
  return certify_best_response(estimate_payoff_curve(request, mc));
}

MarginalCheck finite_difference_marginals(const NoiseDistribution& d,
                                          const TournamentDesign& design, double rival_effort,
                                          double step, DifferenceSource source,
                                          const MonteCarloOptions& mc) {
  if (!(step > 0.0)) throw InvalidInput("finite_difference_marginals: step must be positive");
  const int n = design.players();
  MarginalCheck check;
  double t = design.standard - rival_effort;
  // At a support edge P^(r) has a kink at e*; B_r is then the one-sided
  // derivative from the inside of the support, so difference on that side.
  const Support s = d.support();
  // rho - e* can land a rounding error outside the support; snap it back.
  if (std::isfinite(s.lower) && std::abs(t - s.lower) <= 1e-12 * std::max(1.0, std::abs(s.lower))) t = s.lower;
  if (std::isfinite(s.upper) && std::abs(t - s.upper) <= 1e-12 * std::max(1.0, std::abs(s.upper))) t = s.upper;
  const double up_step = t - step <= s.lower ? 0.0 : step;
  const double down_step = t + step >= s.upper ? 0.0 : step;
  if (up_step == 0.0 && down_step == 0.0) {
    throw InvalidInput("finite_difference_marginals: step wider than the support");
  }
  const double width = up_step + down_step;
  for (int r = 1; r <= n; ++r) check.analytic.push_back(marginal_benefit_rank(d, n, r, t));

  if (source == DifferenceSource::quadrature) {
    for (int r = 1; r <= n; ++r) {
      const double up = prize_probability(d, n, r, rival_effort + up_step, rival_effort, design.standard);
      const double down = prize_probability(d, n, r, rival_effort - down_step, rival_effort, design.standard);
      check.finite_difference.push_back((up - down) / width);
    }
  } else {
    // Same seed on both sides: the counter-based streams reuse every draw.
    const SimulationReport up = simulate_prize_probabilities(d, design, rival_effort + up_step, rival_effort, mc);
    const SimulationReport down = simulate_prize_probabilities(d, design, rival_effort - down_step, rival_effort, mc);
    for (int r = 0; r < n; ++r) {
      const auto i = static_cast<std::size_t>(r);
      check.finite_difference.push_back((up.at_least[i].value - down.at_least[i].value) / width);
    }
  }
  return check;
}

ConcavityDiagnostic concavity_diagnostic(const NoiseDistribution& d, const TournamentDesign& design,
                                         double rival_effort, int points) {
  if (points < 3) throw InvalidInput("concavity_diagnostic: need at least three points");
  ConcavityDiagnostic diag;
  diag.efforts = linspace(0.0, design.cost.max_effort(), static_cast<std::size_t>(points));
  diag.payoffs.resize(diag.efforts.size());
  parallel_for(diag.efforts.size(), [&](std::size_t i) {
    diag.payoffs[i] = deviation_payoff(d, design, diag.efforts[i], rival_effort);
  });

  int previous = 0;
  bool descended = false;
  for (std::size_t i = 0; i + 1 < diag.payoffs.size(); ++i) {
    const double delta = diag.payoffs[i + 1] - diag.payoffs[i];
    const int sign = delta > 1e-12 ? 1 : (delta < -1e-12 ? -1 : 0);
    if (sign == 0) continue;
    if (previous != 0 && sign != previous) ++diag.sign_changes;
    if (sign < 0) descended = true;
    if (sign > 0 && descended) diag.unimodal = false;
    previous = sign;
  }
  diag.reference_payoff = deviation_payoff(d, design, rival_effort, rival_effort);
  const auto best = std::max_element(diag.payoffs.begin(), diag.payoffs.end());
  diag.best_effort = diag.efforts[static_cast<std::size_t>(best - diag.payoffs.begin())];
  diag.max_gain = std::max(0.0, *best - diag.reference_payoff);
  diag.ok = diag.unimodal && diag.max_gain <= 1e-8;
  return diag;
}

}  // namespace tourney
