#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "tourney/errors.hpp"
#include "tourney/quadrature.hpp"

using namespace tourney;

TEST_CASE("quadrature: polynomial and kinked integrands") {
  const std::vector<double> none;
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0, none).value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  // |x - 0.3| on [0, 1] = (0.3^2 + 0.7^2) / 2
  const std::vector<double> kink{0.3};
  const auto r = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, kink);
  CHECK(r.value == doctest::Approx(0.29).epsilon(1e-13));
  CHECK(r.intervals <= 4);
}

TEST_CASE("quadrature: smooth peaked integrand reaches the tolerance") {
  const std::vector<double> none;
  const double exact = std::sqrt(M_PI) * std::erf(5.0);
  const auto r = integrate([](double x) { return std::exp(-x * x); }, -5.0, 5.0, none);
  CHECK(std::abs(r.value - exact) < 1e-10);
}

TEST_CASE("quadrature: failures are reported") {
  const std::vector<double> none;
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, std::numeric_limits<double>::infinity(), none),
                  QuadratureFailure);
  CHECK_THROWS_AS(integrate([](double) { return std::nan(""); }, 0.0, 1.0, none), QuadratureFailure);
  QuadratureOptions tight;
  tight.abs_tol = 1e-300;
  tight.max_intervals = 5;
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, none, tight),
                  QuadratureFailure);
}
