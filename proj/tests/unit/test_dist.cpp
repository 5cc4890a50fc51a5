#include <doctest.h>

#include <cmath>

#include "tourney/dist.hpp"
#include "tourney/dist_json.hpp"
#include "tourney/errors.hpp"
#include "tourney/figures.hpp"
#include "tourney/quadrature.hpp"

using namespace tourney;

TEST_CASE("dist: quantile inverts the cdf for every family") {
  const NoiseDistribution ds[] = {NoiseDistribution::exponential(2.0), NoiseDistribution::gumbel(0.5, 2.0),
                                  NoiseDistribution::normal(1.0, 0.5),  NoiseDistribution::logistic(0.0, 1.5),
                                  NoiseDistribution::uniform(-1.0, 2.0), NoiseDistribution::pareto(2.0, 1.0),
                                  NoiseDistribution::erf_dfr(),          figure1_density("red")};
  for (const auto& d : ds) {
    for (double u : {1e-6, 0.1, 0.37, 0.5, 0.9, 1 - 1e-6}) {
      CAPTURE(d.name());
      CAPTURE(u);
      CHECK(d.cdf(d.quantile(u)) == doctest::Approx(u).epsilon(1e-9));
    }
    CHECK(d.cdf(d.quantile(0.3)) + d.survival(d.quantile(0.3)) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("dist: densities integrate to one") {
  const NoiseDistribution ds[] = {NoiseDistribution::gumbel(), NoiseDistribution::erf_dfr(),
                                  figure1_density("red"), figure1_density("green"), figure1_density("blue")};
  for (const auto& d : ds) {
    const Support s = d.truncated_support();
    const double mass = integrate([&](double x) { return d.pdf(x); }, s.lower, s.upper, d.kinks()).value;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("dist: DFR example has hazard 1 + exp(-x^2)") {
  const auto d = NoiseDistribution::erf_dfr();
  CHECK(d.pdf(0.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(hazard(d, 0.0) == doctest::Approx(2.0).epsilon(1e-14));
  for (double x : {0.3, 1.0, 2.5}) CHECK(hazard(d, x) == doctest::Approx(1.0 + std::exp(-x * x)).epsilon(1e-12));
  CHECK(classify_hazard(d) == HazardClass::dfr);
}

TEST_CASE("dist: piecewise-linear renormalization") {
  const auto red = figure1_density("red");
  CHECK(red.normalization_factor() == doctest::Approx(1.65625).epsilon(1e-15));
  CHECK(red.pdf(0.5) == doctest::Approx(21.0 / 16.0 / 1.65625).epsilon(1e-14));
  CHECK(figure1_density("green").normalization_factor() == doctest::Approx(1.625).epsilon(1e-15));
  CHECK(figure1_density("blue").normalization_factor() == doctest::Approx(1.640625).epsilon(1e-15));
  CHECK_THROWS_AS(NoiseDistribution::piecewise_linear({{0.0, 1.0}, {0.0, 1.0}}), InvalidDistribution);
  CHECK_THROWS_AS(NoiseDistribution::piecewise_linear({{0.0, -1.0}, {1.0, 1.0}}), InvalidDistribution);
}

TEST_CASE("dist: order statistics") {
  const auto d = NoiseDistribution::uniform(0.0, 1.0);
  CHECK(order_statistic_cdf(d, 0, 3, -5.0) == 1.0);
  // Highest of 3 uniforms: x^3; lowest: 1 - (1 - x)^3.
  CHECK(order_statistic_cdf(d, 3, 3, 0.4) == doctest::Approx(0.064).epsilon(1e-14));
  CHECK(order_statistic_cdf(d, 1, 3, 0.4) == doctest::Approx(1 - 0.216).epsilon(1e-14));
  CHECK(order_statistic_pdf(d, 3, 3, 0.4) == doctest::Approx(3 * 0.16).epsilon(1e-14));
  const std::vector<double> none;
  for (int j = 1; j <= 4; ++j) {
    const double mass = integrate([&](double x) { return order_statistic_pdf(d, j, 4, x); }, 0.0, 1.0, none).value;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(order_statistic_pdf(d, 0, 3, 0.5), RankOutOfRange);
}

TEST_CASE("dist: likelihood ratio and hazard") {
  const auto e = NoiseDistribution::exponential(1.5);
  CHECK(likelihood_ratio(e, 0.7) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(hazard(e, 3.0) == doctest::Approx(1.5).epsilon(1e-12));
  const auto p = NoiseDistribution::pareto(2.0, 1.0);
  CHECK(likelihood_ratio(p, 2.0) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK_THROWS_AS(likelihood_ratio(NoiseDistribution::uniform(0, 1), 2.0), ZeroDensity);
}

TEST_CASE("dist: modes of the multi-modal densities") {
  const auto red = find_modes(figure1_density("red"));
  REQUIRE(red.modes.size() == 2);
  CHECK(red.modes[0].x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(red.modes[1].x == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(red.global_mode == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(find_modes(NoiseDistribution::gumbel(0.0, 1.0)).global_mode == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(find_modes(NoiseDistribution::normal(2.0, 1.0)).global_mode == doctest::Approx(2.0).epsilon(1e-8));
  const auto dfr = find_modes(NoiseDistribution::erf_dfr());
  CHECK(dfr.global_mode == 0.0);
  CHECK(dfr.modes.front().boundary);
}

TEST_CASE("dist: shape classification") {
  CHECK(classify_log_shape(NoiseDistribution::gumbel()) == LogClass::log_concave);
  CHECK(classify_log_shape(NoiseDistribution::normal()) == LogClass::log_concave);
  CHECK(classify_log_shape(NoiseDistribution::pareto(2.0)) == LogClass::log_convex);
  CHECK(classify_log_shape(figure1_density("red")) == LogClass::neither);
  CHECK(classify_hazard(NoiseDistribution::gumbel()) == HazardClass::ifr);
  CHECK(classify_hazard(NoiseDistribution::exponential(2.0)) == HazardClass::constant);
  CHECK(classify_hazard(NoiseDistribution::pareto(2.0)) == HazardClass::dfr);
  CHECK(classify_hazard(figure1_density("red"), 1.0) == HazardClass::ifr);
}

TEST_CASE("dist: json round trip and validation") {
  const nlohmann::json spec = {{"family", "gumbel"}, {"params", {{"location", 0.5}, {"scale", 2.0}}}};
  const auto d = distribution_from_json(spec);
  CHECK(d.family() == Family::gumbel);
  CHECK(distribution_to_json(d) == spec);
  CHECK_THROWS_AS(distribution_from_json({{"family", "gumbel"}, {"colour", 1}}), InvalidDistribution);
  CHECK_THROWS_AS(distribution_from_json({{"family", "gumbel"}, {"params", {{"shape", 1}}}}), InvalidDistribution);
  CHECK_THROWS_AS(distribution_from_json({{"family", "cauchy"}}), InvalidDistribution);
  CHECK_THROWS_AS(NoiseDistribution::normal(0.0, -1.0), InvalidDistribution);
}
