#include "tourney/cardinal.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include "tourney/errors.hpp"
#include "tourney/parallel.hpp"
#include "tourney/rng.hpp"

namespace tourney {
namespace {

constexpr std::size_t kBatch = 1 << 14;

void fail(const PayScheme& w, const std::string& what) {
  throw PropertyViolation("pay scheme '" + w.name + "': " + what);
}

}  // namespace

std::vector<double> PayScheme::payments(std::span<const double> y) const {
  std::vector<double> pay(y.size(), 0.0);
  rule(y, pay);
  return pay;
}

double PayScheme::payment(std::span<const double> y, int i) const {
  return payments(y).at(static_cast<std::size_t>(i));
}

void check_properties(const PayScheme& w, const NoiseDistribution& d, double effort,
                      const PropertyCheckOptions& options) {
  if (w.players < 1 || !w.rule) fail(w, "needs a rule and at least one player");
  const auto n = static_cast<std::size_t>(w.players);
  const CounterRng rng(options.seed);
  std::vector<double> y(n), permuted(n), pay(n), pay_permuted(n), bumped(n), pay_bumped(n);
  std::vector<std::size_t> tau(n);
  const double tol = options.tolerance;
  std::uint64_t counter = 0;

  for (int trial = 0; trial < options.trials; ++trial) {
    const auto k = static_cast<std::uint64_t>(trial);
    for (std::size_t i = 0; i < n; ++i) y[i] = effort + d.quantile(rng.uniform(i, k));
    w.rule(y, pay);

    double total = 0.0;
    for (double p : pay) {
      if (!std::isfinite(p) || p < -tol) fail(w, "payments must be finite and nonnegative");
      total += p;
    }
    if (total > 1.0 + tol) {
      std::ostringstream msg;
      msg << "budget violated, payments sum to " << total;
      fail(w, msg.str());
    }

    // Anonymity: relabel players by a random permutation.
    std::iota(tau.begin(), tau.end(), std::size_t{0});
    for (std::size_t i = n; i-- > 1;) {
      const auto j = static_cast<std::size_t>(rng.bits(n + 1, counter++) % (i + 1));
      std::swap(tau[i], tau[j]);
    }
    for (std::size_t i = 0; i < n; ++i) permuted[i] = y[tau[i]];
    w.rule(permuted, pay_permuted);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(pay_permuted[i] - pay[tau[i]]) > tol) fail(w, "anonymity violated");
    }

    // Monotonicity: raise one coordinate.
    const auto i = static_cast<std::size_t>(rng.bits(n + 2, k) % n);
    bumped = y;
    bumped[i] += 2.0 * rng.uniform(n + 3, k);
    w.rule(bumped, pay_bumped);
    if (pay_bumped[i] < pay[i] - tol) fail(w, "monotonicity violated");
  }
}

PayScheme tournament_as_payscheme(const PrizeSchedule& prizes, double standard) {
  PayScheme w;
  w.players = prizes.players();
  std::ostringstream name;
  name << "tournament(standard=" << standard << ")";
  w.name = name.str();
  std::vector<double> v(prizes.prizes().begin(), prizes.prizes().end());
  w.rule = [v, standard](std::span<const double> y, std::span<double> pay) {
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (y[i] < standard) {
        pay[i] = 0.0;
        continue;
      }
      std::size_t rank = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && y[j] >= standard && (y[j] > y[i] || (y[j] == y[i] && j < i))) ++rank;
      }
      pay[i] = rank < v.size() ? v[rank] : 0.0;
    }
  };
  return w;
}

PayScheme tournament_as_payscheme(const TournamentDesign& design) {
  return tournament_as_payscheme(design.prizes, design.standard);
}

PayScheme capped_linear_sharing(int n, double kink, double floor) {
  if (!(floor > 0.0)) throw InvalidInput("capped_linear_sharing: floor must be positive");
  PayScheme w;
  w.players = n;
  std::ostringstream name;
  name << "linear(k=" << kink << ", floor=" << floor << ")";
  w.name = name.str();
  w.rule = [kink, floor](std::span<const double> y, std::span<double> pay) {
    double total = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      pay[i] = std::max(y[i] - kink, 0.0);
      total += pay[i];
    }
    const double scale = std::max(total, floor);
    for (double& p : pay) p /= scale;
  };
  return w;
}

PayScheme mix(const PayScheme& a, const PayScheme& b, double weight) {
  if (a.players != b.players) throw InvalidInput("mix: schemes differ in player count");
  if (!(weight >= 0.0 && weight <= 1.0)) throw InvalidInput("mix: weight outside [0, 1]");
  PayScheme w;
  w.players = a.players;
  std::ostringstream name;
  name << weight << "*" << a.name << " + " << 1.0 - weight << "*" << b.name;
  w.name = name.str();
  w.rule = [a, b, weight](std::span<const double> y, std::span<double> pay) {
    a.rule(y, pay);
    std::vector<double> other(y.size());
    b.rule(y, other);
    for (std::size_t i = 0; i < pay.size(); ++i) pay[i] = weight * pay[i] + (1.0 - weight) * other[i];
  };
  return w;
}

PrizeSchedule random_prize_schedule(int n, std::uint64_t seed, std::uint64_t index) {
  if (n < 1) throw InvalidSchedule("random_prize_schedule: need n >= 1");
  const CounterRng rng(mix64(seed ^ 0x5ca1ab1eULL));
  std::vector<double> w(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int r = 0; r < n; ++r) {
    w[static_cast<std::size_t>(r)] = -std::log(rng.uniform(static_cast<std::uint64_t>(r), index));
    total += w[static_cast<std::size_t>(r)];
  }
  std::vector<double> diffs(w.size());
  for (int r = 0; r < n; ++r) diffs[static_cast<std::size_t>(r)] = w[static_cast<std::size_t>(r)] / total / (r + 1);
  // Absorb rounding so the budget is exactly one.
  std::vector<double> v(diffs.size());
  double acc = 0.0;
  for (std::size_t r = diffs.size(); r-- > 0;) v[r] = acc += diffs[r];
  double sum = std::accumulate(v.begin(), v.end(), 0.0);
  v[0] += 1.0 - sum;
  return PrizeSchedule(std::move(v));
}

std::vector<PayScheme> random_scheme_battery(const NoiseDistribution& d, int n, double effort,
                                             int count, std::uint64_t seed) {
  const CounterRng rng(seed);
  const double q10 = d.quantile(0.1);
  const double q90 = d.quantile(0.9);
  const double spread = std::max(q90 - q10, 1e-6);
  std::vector<PayScheme> out;
  for (int s = 0; s < count; ++s) {
    const auto k = static_cast<std::uint64_t>(s);
    const double standard = effort + d.quantile(0.05 + 0.9 * rng.uniform(0, k));
    const PayScheme rank = tournament_as_payscheme(random_prize_schedule(n, seed, k), standard);
    const double kink = effort + d.quantile(0.05 + 0.9 * rng.uniform(1, k));
    const double floor = spread * (0.05 + 2.0 * rng.uniform(2, k));
    const PayScheme linear = capped_linear_sharing(n, kink, floor);
    // Every fifth scheme is a pure member of each family.
    double weight = rng.uniform(3, k);
    if (s % 5 == 0) weight = 1.0;
    if (s % 5 == 1) weight = 0.0;
    out.push_back(mix(rank, linear, weight));
  }
  return out;
}

Estimate evaluate_R(const NoiseDistribution& d, const PayScheme& w, double effort,
                    const MonteCarloOptions& mc, bool check) {
  if (!mc.seed) throw SeedRequired("evaluate_R needs an explicit seed");
  if (mc.draws < 2) throw InvalidInput("evaluate_R needs at least two draws");
  if (!d.upper_density_vanishes()) {
    throw InvalidDistribution("evaluate_R: density must vanish at the upper support bound");
  }
  if (check) check_properties(w, d, effort, {200, *mc.seed, 1e-12});
  const double mode = find_modes(d).global_mode;
  const auto n = static_cast<std::size_t>(w.players);
  const CounterRng rng(*mc.seed);

  struct Sums {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  std::vector<Sums> sums((mc.draws + kBatch - 1) / kBatch);
  parallel_for(sums.size(), [&](std::size_t b) {
    std::vector<double> x(n), y(n), pay(n);
    const std::size_t end = std::min(mc.draws, (b + 1) * kBatch);
    for (std::size_t k = b * kBatch; k < end; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = d.quantile(rng.uniform(i, k));
        y[i] = effort + x[i];
      }
      if (!(x[0] > mode)) continue;
      const double lambda = likelihood_ratio(d, x[0]);
      if (!(std::abs(lambda) <= 1e6)) {
        std::ostringstream msg;
        msg << "likelihood ratio " << lambda << " at x = " << x[0] << " exceeds 1e6";
        throw UnboundedLikelihoodRatio(msg.str());
      }
      w.rule(y, pay);
      const double value = pay[0] * lambda;
      sums[b].sum += value;
      sums[b].sum_sq += value * value;
    }
  }, mc.workers);

  double sum = 0.0;
  double sum_sq = 0.0;
  for (const Sums& s : sums) {
    sum += s.sum;
    sum_sq += s.sum_sq;
  }
  const double draws = static_cast<double>(mc.draws);
  const double mean = sum / draws;
  const double var = std::max(0.0, (sum_sq - draws * mean * mean) / (draws - 1.0));
  return {mean, std::sqrt(var / draws)};
}

double marginal_benefit_bound(const NoiseDistribution& d, int n, LogClass* log_class) {
  const LogClass cls = classify_log_shape(d);
  if (log_class) *log_class = cls;
  switch (cls) {
    case LogClass::log_concave:
      return total_marginal_benefit(d, PrizeSchedule::winner_take_all(n), find_modes(d).global_mode);
    case LogClass::log_convex:
      return d.pdf(d.support().lower) / n;
    case LogClass::neither:
      break;
  }
  throw NoBoundAvailable("noise density is neither log-concave nor log-convex; no bound on R");
}

BoundCheck check_bound(const NoiseDistribution& d, const PayScheme& w, double effort,
                       const MonteCarloOptions& mc) {
  BoundCheck result;
  result.bound = marginal_benefit_bound(d, w.players, &result.log_class);
  result.estimate = evaluate_R(d, w, effort, mc);
  result.satisfied = result.estimate.value <= result.bound + 4.0 * result.estimate.standard_error;
  return result;
}

}  // namespace tourney
