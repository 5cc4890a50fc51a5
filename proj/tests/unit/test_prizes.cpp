#include <doctest.h>

#include <cmath>

#include "tourney/cardinal.hpp"
#include "tourney/errors.hpp"
#include "tourney/figures.hpp"
#include "tourney/prizes.hpp"

using namespace tourney;

TEST_CASE("modified hazard") {
  const auto g = NoiseDistribution::gumbel();
  CHECK(modified_hazard(g, 0.0, 1.0) == doctest::Approx(hazard(g, 1.0)).epsilon(1e-14));
  const auto e = NoiseDistribution::exponential(2.0);
  for (double x : {0.0, 0.5, 3.0}) CHECK(modified_hazard(e, 0.0, x) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(modified_hazard(NoiseDistribution::erf_dfr(), 0.0, 0.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("rank scores: both representations agree") {
  const NoiseDistribution ds[] = {NoiseDistribution::gumbel(), NoiseDistribution::normal(),
                                  figure1_density("red"), NoiseDistribution::erf_dfr(),
                                  NoiseDistribution::pareto(2.0)};
  for (const auto& d : ds) {
    for (int r = 1; r <= 4; ++r) {
      const double t = find_modes(d).global_mode;
      CHECK(rank_score_by_hazard(d, 4, r, t) ==
            doctest::Approx(marginal_benefit_rank(d, 4, r, t) / r).epsilon(1e-8));
    }
  }
}

TEST_CASE("rank scores: shape regimes") {
  for (double rate : {0.5, 1.0, 2.0}) {
    for (int r = 1; r <= 4; ++r) {
      CHECK(rank_score(NoiseDistribution::exponential(rate), 4, r, 0.0) == doctest::Approx(rate / 4).epsilon(1e-10));
    }
  }
  const auto g = NoiseDistribution::gumbel();
  for (int r = 1; r < 5; ++r) CHECK(rank_score(g, 5, r, 0.0) > rank_score(g, 5, r + 1, 0.0));
  const auto dfr = NoiseDistribution::erf_dfr();
  for (int r = 1; r < 3; ++r) CHECK(rank_score(dfr, 3, r, 0.0) < rank_score(dfr, 3, r + 1, 0.0));
}

TEST_CASE("optimal prizes: regimes") {
  const auto c = CostFunction::power(1.0, 2.0);
  for (int n : {2, 3, 6}) {
    const auto gumbel = optimal_prizes(NoiseDistribution::gumbel(), n, c);
    CHECK(gumbel.report.regime == Regime::wta);
    CHECK(gumbel.report.r_star == 1);
  }
  const auto dfr = optimal_prizes(NoiseDistribution::erf_dfr(), 3, c);
  CHECK(dfr.report.regime == Regime::eps);
  CHECK(dfr.report.r_star == 3);
  CHECK(dfr.solution.effort == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(dfr.solution.pass_probability == 1.0);

  const auto ex = optimal_prizes(NoiseDistribution::exponential(1.0), 4, c);
  CHECK(ex.report.regime == Regime::tie);
  CHECK(ex.report.tie_set == std::vector<int>{1, 2, 3, 4});
  CHECK(ex.report.r_star == 1);
}

TEST_CASE("optimal prizes: sufficiency precondition and override") {
  const auto red = figure1_density("red");
  const auto c = CostFunction::power(1.0, 2.0);
  CHECK_THROWS_AS(optimal_prizes(red, 3, c), SufficiencyViolated);
  PrizeOptions at_one;
  at_one.threshold = 1.0;
  const auto design = optimal_prizes(red, 3, c, at_one);
  CHECK(design.solution.threshold == 1.0);
  CHECK(design.report.scores.size() == 3);
}

TEST_CASE("optimal prizes: budget identity and corner optimality") {
  const auto g = NoiseDistribution::gumbel();
  const auto report = choose_prizes(g, 4, 0.0);
  const auto d = report.schedule.differentials();
  double budget = 0.0;
  for (std::size_t r = 0; r < d.size(); ++r) budget += (r + 1) * d[r];
  CHECK(budget == doctest::Approx(1.0).epsilon(1e-15));

  // No random schedule beats the corner.
  const double corner = total_marginal_benefit(g, report.schedule, 0.0);
  std::vector<double> b(4);
  for (int r = 1; r <= 4; ++r) b[r - 1] = marginal_benefit_rank(g, 4, r, 0.0);
  double best = 0.0;
  for (std::uint64_t k = 0; k < 10000; ++k) {
    const auto diffs = random_prize_schedule(4, 11, k).differentials();
    double value = 0.0;
    for (int r = 0; r < 4; ++r) value += b[r] * diffs[r];
    best = std::max(best, value);
  }
  CHECK(best <= corner + 1e-12);
  CHECK(best > 0.9 * corner);
}

TEST_CASE("optimal prizes: a first-order point that is not an equilibrium is flagged") {
  const auto pareto = NoiseDistribution::pareto(2.0, 1.0);
  const auto loose = optimal_prizes(pareto, 3, CostFunction::power(1.0, 2.0));
  CHECK(loose.report.regime == Regime::eps);
  CHECK(loose.solution.effort == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK_FALSE(loose.solution.concavity_ok);
  REQUIRE_FALSE(loose.solution.warnings.empty());
  CHECK(loose.solution.warnings.back().rfind("ConcavityWarning", 0) == 0);
  CHECK(optimal_prizes(pareto, 3, CostFunction::power(4.0, 2.0)).solution.concavity_ok);
}
