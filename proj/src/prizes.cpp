#include "tourney/prizes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tourney/errors.hpp"
#include "tourney/parallel.hpp"
#include "tourney/quadrature.hpp"

namespace tourney {
namespace {

double choose(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

double modified_hazard(const NoiseDistribution& d, double t, double x) {
  const double s = d.survival(x);
  if (s < 1e-300) throw SurvivalUnderflow("modified_hazard: survival underflows");
  return d.pdf(std::max(x, t)) / s;
}

double rank_score_by_hazard(const NoiseDistribution& d, int n, int r, double t) {
  if (n < 1 || r < 1 || r > n) {
    std::ostringstream msg;
    msg << "rank " << r << " outside 1.." << n;
    throw RankOutOfRange(msg.str());
  }
  const int j = n - r;
  // X_(0:n) sits at -infinity, where h~ = f(t).
  if (j == 0) return d.pdf(t) / n;
  // Density of X_(j:n) with one survival factor cancelled against h~.
  const double coef = n * choose(n - 1, j - 1);
  auto integrand = [&](double x) {
    const double f = d.pdf(x);
    if (f == 0.0) return 0.0;
    return coef * std::pow(d.cdf(x), j - 1) * std::pow(d.survival(x), n - j - 1) * f *
           d.pdf(std::max(x, t));
  };
  const Support s = d.truncated_support();
  std::vector<double> breaks(d.integration_breaks().begin(), d.integration_breaks().end());
  breaks.push_back(t);
  QuadratureOptions quad;
  quad.abs_tol = 1e-12;
  return integrate(integrand, s.lower, s.upper, breaks, quad).value / n;
}

double rank_score(const NoiseDistribution& d, int n, int r, double t, double tolerance) {
  QuadratureOptions quad;
  quad.abs_tol = 1e-12;
  const double direct = marginal_benefit_rank(d, n, r, t, quad) / r;
  const double via_hazard = rank_score_by_hazard(d, n, r, t);
  if (std::abs(direct - via_hazard) > tolerance * std::max(1.0, std::abs(direct))) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "rank_score: representations disagree for r = " << r << " at t = " << t << ": "
        << direct << " vs " << via_hazard;
    throw RepresentationMismatch(msg.str());
  }
  return direct;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::wta: return "WTA";
    case Regime::eps: return "EPS";
    case Regime::tie: return "tie";
    case Regime::interior: return "interior";
  }
  return "unknown";
}

PrizeDesignReport choose_prizes(const NoiseDistribution& d, int n, double t, double tie_tol) {
  if (n < 2) throw InvalidInput("prize design needs at least two players");
  PrizeDesignReport report;
  report.threshold = t;
  report.scores.assign(static_cast<std::size_t>(n), 0.0);
  parallel_for(report.scores.size(), [&](std::size_t i) {
    report.scores[i] = rank_score(d, n, static_cast<int>(i) + 1, t);
  });
  const double best = *std::max_element(report.scores.begin(), report.scores.end());
  for (int r = 1; r <= n; ++r) {
    if (report.scores[static_cast<std::size_t>(r - 1)] >= best - tie_tol) report.tie_set.push_back(r);
  }
  report.r_star = report.tie_set.front();
  report.schedule = PrizeSchedule::top_equal(report.r_star, n);
  if (report.tie_set.size() > 1) {
    report.regime = Regime::tie;
  } else if (report.r_star == 1) {
    report.regime = Regime::wta;
  } else if (report.r_star == n) {
    report.regime = Regime::eps;
  } else {
    report.regime = Regime::interior;
  }
  return report;
}

PrizeDesign optimal_prizes(const NoiseDistribution& d, int n, const CostFunction& c,
                           const PrizeOptions& options) {
  double t = 0.0;
  if (options.threshold) {
    t = *options.threshold;
  } else {
    ThresholdOptions check = options.solve.threshold;
    check.cross_validate = false;
    const SufficiencyResult suff = global_mode_sufficiency(d, n, check);
    if (!suff.holds) {
      std::ostringstream msg;
      msg << "B_1 peaks at mode " << suff.witness << ", not at the global mode " << suff.global_mode
          << "; pass an explicit threshold";
      throw SufficiencyViolated(msg.str());
    }
    t = suff.global_mode;
  }
  PrizeDesign design{choose_prizes(d, n, t, options.tie_tol), {}};
  design.solution = solve_at_threshold(d, design.report.schedule, t, c, options.solve);
  return design;
}

}  // namespace tourney
