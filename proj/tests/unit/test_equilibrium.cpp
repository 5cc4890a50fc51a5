#include <doctest.h>

#include <cmath>
#include <string>

#include "tourney/equilibrium.hpp"
#include "tourney/errors.hpp"
#include "tourney/figures.hpp"

using namespace tourney;

TEST_CASE("schedule: invariants") {
  try {
    PrizeSchedule({0.5, 0.4});
    FAIL("expected InvalidSchedule");
  } catch (const InvalidSchedule& e) {
    CHECK(std::string(e.what()).find("budget invariant violated") != std::string::npos);
  }
  CHECK_THROWS_AS(PrizeSchedule({0.3, 0.7}), InvalidSchedule);
  CHECK_THROWS_AS(PrizeSchedule({1.2, -0.2}), InvalidSchedule);
  CHECK_THROWS_AS(PrizeSchedule::top_equal(4, 3), InvalidSchedule);

  const PrizeSchedule v({0.5, 0.3, 0.2});
  const auto d = v.differentials();
  CHECK(d[0] == doctest::Approx(0.2));
  CHECK(d[2] == doctest::Approx(0.2));
  const PrizeSchedule back = PrizeSchedule::from_differentials(d);
  for (int r = 1; r <= 3; ++r) CHECK(back.prize(r) == doctest::Approx(v.prize(r)).epsilon(1e-15));
  CHECK(v.prize(4) == 0.0);
  CHECK_THROWS_AS(v.prize(0), RankOutOfRange);
}

TEST_CASE("cost: power and custom") {
  const auto c = CostFunction::power(1.0, 2.0);
  CHECK(c.max_effort() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(c.inverse_marginal(0.5) == doctest::Approx(0.5));
  const auto cubic = CostFunction::custom([](double e) { return e * e * e; }, [](double e) { return 3 * e * e; },
                                          [](double y) { return std::sqrt(y / 3); });
  CHECK(cubic.max_effort() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(CostFunction::power(1.0, 1.0), InvalidCost);
  CHECK_THROWS_AS(CostFunction::custom([](double e) { return e + 1; }, [](double) { return 1.0; },
                                       [](double y) { return y; }),
                  InvalidCost);
}

TEST_CASE("marginal benefit: closed forms") {
  const auto u = NoiseDistribution::uniform(0.0, 1.0);
  // B_1 = f(t) F(t) + int_t^1 f^2 = t + (1 - t) for two uniform players.
  for (double t : {0.1, 0.5, 0.9}) CHECK(marginal_benefit_rank(u, 2, 1, t) == doctest::Approx(1.0).epsilon(1e-12));

  const auto g = NoiseDistribution::gumbel();
  for (double t : {-1.0, 0.0, 2.0}) {
    CHECK(marginal_benefit_rank(g, 4, 4, t) == doctest::Approx(g.pdf(t)).epsilon(1e-14));
    CHECK(total_marginal_benefit(g, PrizeSchedule::equal_sharing(4), t) ==
          doctest::Approx(g.pdf(t) / 4).epsilon(1e-12));
  }
  CHECK_THROWS_AS(marginal_benefit_rank(g, 3, 4, 0.0), RankOutOfRange);
}

TEST_CASE("prize probability: uniform closed form and symmetry") {
  const auto u = NoiseDistribution::uniform(0.0, 1.0);
  // t = 0.5: S(t) F(t) + int_t^1 S(x) dx = 0.25 + 0.125
  CHECK(prize_probability(u, 2, 1, 0.2, 0.2, 0.7) == doctest::Approx(0.375).epsilon(1e-12));
  // Far-below standard: everyone qualifies and each rank is equally likely.
  const auto g = NoiseDistribution::gumbel();
  for (int r = 1; r <= 3; ++r) {
    CHECK(prize_probability(g, 3, r, 0.0, 0.0, -60.0) == doctest::Approx(r / 3.0).epsilon(1e-9));
  }
}

TEST_CASE("prize probability: derivative in effort equals B_r") {
  const auto red = figure1_density("red");
  const double rival = 0.3;
  const double standard = rival + 1.0;
  const double h = 1e-5;
  for (int r = 1; r <= 3; ++r) {
    const double fd = (prize_probability(red, 3, r, rival + h, rival, standard) -
                       prize_probability(red, 3, r, rival - h, rival, standard)) / (2 * h);
    CHECK(fd == doctest::Approx(marginal_benefit_rank(red, 3, r, 1.0)).epsilon(1e-5));
  }
}

TEST_CASE("solve: exponential noise, quadratic cost") {
  const auto d = NoiseDistribution::exponential(1.0);
  const auto sol = solve_design(d, PrizeSchedule::winner_take_all(2), CostFunction::power(1.0, 2.0));
  CHECK(sol.threshold == 0.0);
  CHECK(sol.effort == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sol.standard == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sol.pass_probability == 1.0);
  CHECK(sol.concavity_ok);
}

TEST_CASE("solve: multi-modal threshold depends on the schedule") {
  const auto red = figure1_density("red");
  const auto c = CostFunction::power(1.0, 2.0);
  CHECK(solve_design(red, PrizeSchedule::winner_take_all(3), c).threshold == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(solve_design(red, PrizeSchedule::equal_sharing(3), c).threshold == doctest::Approx(0.5).epsilon(1e-12));
  // Frozen from an independent segment-wise integration of the density.
  CHECK(total_marginal_benefit(red, PrizeSchedule::winner_take_all(3), 1.0) == doctest::Approx(0.61295).epsilon(1e-4));
  CHECK(total_marginal_benefit(red, PrizeSchedule::winner_take_all(3), 0.5) == doctest::Approx(0.60833).epsilon(1e-4));
}

TEST_CASE("solve: effort beyond the budget is rejected") {
  const auto steep = NoiseDistribution::normal(0.0, 0.01);
  CHECK_THROWS_AS(solve_design(steep, PrizeSchedule::winner_take_all(2), CostFunction::power(1.0, 2.0)),
                  EffortOutOfRange);
}

TEST_CASE("sufficiency: holds unless B_1 peaks at a lower mode") {
  CHECK_FALSE(global_mode_sufficiency(figure1_density("red"), 3).holds);
  CHECK(global_mode_sufficiency(figure1_density("green"), 3).holds);
  CHECK(global_mode_sufficiency(NoiseDistribution::gumbel(), 3).holds);
  const auto red = global_mode_sufficiency(figure1_density("red"), 3);
  CHECK(red.witness == doctest::Approx(1.0));
  CHECK(red.grid_argmax == doctest::Approx(1.0).epsilon(1e-9));
}
