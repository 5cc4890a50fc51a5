#include "tourney/adapters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tourney/errors.hpp"

namespace tourney {
namespace {

double effort_sum(const TullockConfig& cfg) {
  if (!(cfg.rho > 0.0) || !std::isfinite(cfg.rho)) throw InvalidInput("tullock: rho must be positive");
  if (cfg.efforts.size() != static_cast<std::size_t>(cfg.n)) {
    throw InvalidInput("tullock: need one effort per player");
  }
  double total = 0.0;
  for (double e : cfg.efforts) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw InvalidInput("tullock: efforts must be nonnegative");
    total += e;
  }
  if (total == 0.0) throw AllZeroEfforts("tullock: all efforts are zero");
  return total;
}

template <class Fn>
double bisect(Fn fn, double lo, double hi, double tol) {
  double flo = fn(lo);
  for (int i = 0; i < 400 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = fn(mid);
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double tullock_csf_with_standard(const TullockConfig& cfg, int i) {
  const double total = effort_sum(cfg);
  if (i < 0 || i >= cfg.n) throw RankOutOfRange("tullock: player index out of range");
  return cfg.efforts[static_cast<std::size_t>(i)] / total * -std::expm1(-total / cfg.rho);
}

double tullock_no_winner(const TullockConfig& cfg) { return std::exp(-effort_sum(cfg) / cfg.rho); }

TullockOptimum tullock_optimal(int n) {
  if (n < 2) throw InvalidInput("tullock: need at least two players");
  const double n2 = static_cast<double>(n) * n;
  const double e = (n - 1) / n2 + std::exp(-n) / n2;
  return {e, e};
}

double tullock_equilibrium_effort(int n, double rho) {
  if (n < 2) throw InvalidInput("tullock: need at least two players");
  if (!(rho > 0.0)) throw InvalidInput("tullock: rho must be positive");
  const double nn = n;
  auto foc = [&](double e) {
    const double z = std::exp(-nn * e / rho);
    return (nn - 1.0) * -std::expm1(-nn * e / rho) / (nn * nn * e) + z / (nn * rho) - 1.0;
  };
  // The left side falls from 1/rho at e = 0 towards 0, so a root needs rho < 1.
  if (rho >= 1.0) return 0.0;
  double hi = 1.0;
  while (foc(hi) > 0.0) hi *= 2.0;
  return bisect(foc, 1e-300, hi, 1e-15);
}

double tullock_self_consistent_effort(int n) {
  if (n < 2) throw InvalidInput("tullock: need at least two players");
  const double nn = n;
  auto foc = [&](double e) {
    return (nn - 1.0) * -std::expm1(-nn) / (nn * nn * e) + std::exp(-nn) / (nn * e) - 1.0;
  };
  return bisect(foc, 1e-6, 1.0, 1e-15);
}

BestResponseReport tullock_verify(int n, double rival_effort, double rho, std::size_t grid_size,
                                  const MonteCarloOptions& mc) {
  if (!(rival_effort > 0.0) || !(rho > 0.0)) throw InvalidInput("tullock: efforts and rho must be positive");
  if (grid_size < 2) throw InvalidInput("tullock: need at least two grid points");
  std::vector<double> efforts;
  for (std::size_t k = 1; k <= grid_size; ++k) {
    efforts.push_back(std::log(static_cast<double>(k) / static_cast<double>(grid_size)));
  }
  const double reference = std::log(rival_effort);
  efforts.push_back(reference);
  std::sort(efforts.begin(), efforts.end());
  efforts.erase(std::unique(efforts.begin(), efforts.end()), efforts.end());
  const auto ref = static_cast<std::size_t>(
      std::find(efforts.begin(), efforts.end(), reference) - efforts.begin());
  PayoffCurveRequest request{NoiseDistribution::gumbel(0.0, 1.0),
                             PrizeSchedule::winner_take_all(n),
                             std::log(rho),
                             reference,
                             std::move(efforts),
                             ref,
                             [](double e_hat) { return std::exp(e_hat); }};
  return certify_best_response(estimate_payoff_curve(request, mc));
}

double idea_quantile(const IdeaDistribution& h, double u) {
  if (!(u > 0.0 && u < 1.0)) throw InvalidInput("idea_quantile: probability must lie in (0, 1)");
  if (h.inverse) return h.inverse(u);
  if (!h.cdf) throw InvalidDistribution("idea distribution needs a CDF");
  double lo = h.lower;
  double hi = h.upper;
  if (!std::isfinite(hi)) {
    hi = std::max(1.0, lo + 1.0);
    for (int i = 0; i < 2000 && h.cdf(hi) < u; ++i) hi *= 2.0;
  }
  if (!std::isfinite(lo)) {
    lo = std::min(-1.0, hi - 1.0);
    for (int i = 0; i < 2000 && h.cdf(lo) > u; ++i) lo *= 2.0;
  }
  return bisect([&](double x) { return h.cdf(x) - u; }, lo, hi, 1e-12);
}

double fm_optimal_standard(const IdeaDistribution& h, int n) {
  return idea_quantile(h, std::exp(-1.0 / tullock_optimal(n).effort));
}

double fm_csf(const IdeaDistribution& h, double rho, const std::vector<double>& efforts, int i) {
  if (i < 0 || static_cast<std::size_t>(i) >= efforts.size()) {
    throw RankOutOfRange("fm_csf: player index out of range");
  }
  const double total = std::accumulate(efforts.begin(), efforts.end(), 0.0);
  if (total == 0.0) throw AllZeroEfforts("fm_csf: all efforts are zero");
  return efforts[static_cast<std::size_t>(i)] / total * (1.0 - std::pow(h.cdf(rho), total));
}

double patent_race_deadline(const NoiseDistribution& d_hat, double effort) {
  if (!(effort > 0.0)) throw InvalidInput("patent race: effort must be positive");
  return std::exp(-find_modes(d_hat).global_mode) / effort;
}

}  // namespace tourney
