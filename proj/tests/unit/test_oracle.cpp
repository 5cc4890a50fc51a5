#include <doctest.h>

#include <cmath>

#include "tourney/errors.hpp"
#include "tourney/figures.hpp"
#include "tourney/oracle.hpp"

using namespace tourney;

namespace {

MonteCarloOptions mc(std::size_t draws, std::uint64_t seed, std::size_t workers = 0) {
  MonteCarloOptions o;
  o.draws = draws;
  o.seed = seed;
  o.workers = workers;
  return o;
}

TournamentDesign design(double standard, PrizeSchedule v) {
  return {standard, std::move(v), CostFunction::power(1.0, 2.0)};
}

}  // namespace

TEST_CASE("oracle: a seed is required") {
  MonteCarloOptions o;
  CHECK_THROWS_AS(simulate_prize_probabilities(NoiseDistribution::gumbel(), design(0.0, PrizeSchedule::winner_take_all(2)),
                                               0.0, 0.0, o),
                  SeedRequired);
}

TEST_CASE("oracle: uniform noise matches the closed form") {
  const auto u = NoiseDistribution::uniform(0.0, 1.0);
  const auto rep = simulate_prize_probabilities(u, design(0.7, PrizeSchedule::winner_take_all(2)), 0.2, 0.2,
                                                mc(200000, 3));
  CHECK(std::abs(rep.at_least[0].value - 0.375) < 3 * rep.at_least[0].standard_error);
  CHECK(rep.at_least[1].value == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("oracle: exchangeable ranks when everyone qualifies") {
  const auto g = NoiseDistribution::gumbel();
  const auto rep = simulate_prize_probabilities(g, design(-1e9, PrizeSchedule::equal_sharing(4)), 0.0, 0.0,
                                                mc(200000, 5));
  for (const auto& e : rep.exact) CHECK(std::abs(e.value - 0.25) < 3 * e.standard_error);
  CHECK(rep.pass_fraction.value == 1.0);
}

TEST_CASE("oracle: the DFR example passes everyone at t = 0") {
  const auto d = NoiseDistribution::erf_dfr();
  const double e = 2.0 / 3.0;
  const auto rep = simulate_prize_probabilities(d, design(e, PrizeSchedule::equal_sharing(3)), e, e, mc(100000, 9));
  CHECK(rep.pass_fraction.value == 1.0);
}

TEST_CASE("oracle: results do not depend on the worker count") {
  const auto red = figure1_density("red");
  const auto dsg = design(1.2, PrizeSchedule({0.6, 0.3, 0.1}));
  const auto a = simulate_prize_probabilities(red, dsg, 0.25, 0.2, mc(100000, 17, 1));
  const auto b = simulate_prize_probabilities(red, dsg, 0.25, 0.2, mc(100000, 17, 7));
  for (int r = 0; r < 3; ++r) {
    CHECK(a.at_least[r].value == b.at_least[r].value);
    CHECK(a.at_least[r].standard_error == b.at_least[r].standard_error);
  }
  const auto c1 = verify_best_response(red, dsg, 0.2, 20, mc(50000, 4, 1));
  const auto c2 = verify_best_response(red, dsg, 0.2, 20, mc(50000, 4, 5));
  CHECK(c1.curve.payoffs == c2.curve.payoffs);
  CHECK(c1.curve.gap_errors == c2.curve.gap_errors);
}

TEST_CASE("oracle: best-response certification") {
  const auto d = NoiseDistribution::exponential(1.0);
  const auto dsg = design(0.5, PrizeSchedule::winner_take_all(2));
  const auto ok = verify_best_response(d, dsg, 0.5, 100, mc(200000, 21));
  CHECK(ok.certified);
  const auto wrong = verify_best_response(d, dsg, 0.8, 100, mc(200000, 21));
  CHECK_FALSE(wrong.certified);
  CHECK(wrong.gap > 5 * wrong.gap_error);
  CHECK(wrong.best_effort < 0.8);
}

TEST_CASE("oracle: common random numbers keep the payoff curve smooth") {
  const auto d = NoiseDistribution::gumbel();
  const auto dsg = design(0.3, PrizeSchedule::winner_take_all(3));
  const auto rep = verify_best_response(d, dsg, 0.3, 200, mc(100000, 2));
  const auto& e = rep.curve.efforts;
  const auto& p = rep.curve.payoffs;
  // The winning chance moves by at most max f = exp(-1) per unit effort, plus sampling noise.
  const double fmax = std::exp(-1.0);
  for (std::size_t i = 1; i < e.size(); ++i) {
    const double de = e[i] - e[i - 1];
    const double prize_step = (p[i] + e[i] * e[i] / 2) - (p[i - 1] + e[i - 1] * e[i - 1] / 2);
    CHECK(std::abs(prize_step) <= fmax * de + 4 * std::sqrt(fmax * de / 100000.0));
  }
}

TEST_CASE("oracle: finite-difference marginals") {
  const auto u = NoiseDistribution::uniform(0.0, 1.0);
  const auto chk = finite_difference_marginals(u, design(0.7, PrizeSchedule::winner_take_all(2)), 0.2, 1e-4);
  CHECK(chk.finite_difference[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(chk.finite_difference[1] == doctest::Approx(u.pdf(0.5)).epsilon(1e-3));

  const auto red = figure1_density("red");
  const auto rchk = finite_difference_marginals(red, design(1.3, PrizeSchedule::winner_take_all(3)), 0.3, 1e-4);
  for (int r = 0; r < 3; ++r) CHECK(std::abs(rchk.finite_difference[r] - rchk.analytic[r]) < 1e-3);

  const auto mchk = finite_difference_marginals(red, design(1.3, PrizeSchedule::winner_take_all(3)), 0.3, 0.05,
                                                DifferenceSource::monte_carlo, mc(400000, 8));
  for (int r = 0; r < 3; ++r) CHECK(std::abs(mchk.finite_difference[r] - mchk.analytic[r]) < 0.03);
}

TEST_CASE("oracle: concavity diagnostic") {
  const auto d = NoiseDistribution::gumbel();
  const auto diag = concavity_diagnostic(d, design(0.3, PrizeSchedule::winner_take_all(3)), 0.3);
  CHECK(diag.unimodal);
  CHECK(diag.sign_changes <= 1);
  CHECK(diag.efforts.size() == 400);
}
