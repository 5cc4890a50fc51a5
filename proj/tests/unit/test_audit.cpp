#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "tourney/audit.hpp"
#include "tourney/errors.hpp"
#include "tourney/rng.hpp"

using namespace tourney;

namespace {

std::vector<double> draw(const NoiseDistribution& d, std::size_t n, std::uint64_t seed, double shift = 0.0) {
  const CounterRng rng(seed);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = shift + d.quantile(rng.uniform(0, i));
  return x;
}

}  // namespace

TEST_CASE("audit: bandwidth and density") {
  const auto x = draw(NoiseDistribution::normal(), 10000, 1);
  const double h = silverman_bandwidth(x);
  CHECK(h == doctest::Approx(0.9 * std::pow(10000.0, -0.2)).epsilon(0.05));
  const KernelDensity kde = kernel_density(x, h, 2048);
  const double step = kde.grid[1] - kde.grid[0];
  const double mass = std::accumulate(kde.density.begin(), kde.density.end(), 0.0) * step;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("audit: recommendations follow the modal interval") {
  PerformanceSample sample;
  sample.observations = draw(NoiseDistribution::normal(2.0, 1.0), 20000, 3);
  AuditOptions options;
  options.bootstrap = 200;
  options.seed = 4;
  sample.declared_standard = 2.0;
  const auto keep = audit(sample, options);
  REQUIRE(keep.comparison);
  CHECK(keep.comparison->recommendation == Recommendation::keep);
  CHECK(keep.comparison->pass_fraction.value == doctest::Approx(0.5).epsilon(0.03));
  CHECK(keep.ci_low < 2.0);
  CHECK(keep.ci_high > 2.0);
  sample.declared_standard = 1.0;
  CHECK(audit(sample, options).comparison->recommendation == Recommendation::raise);
  sample.declared_standard = 3.0;
  CHECK(audit(sample, options).comparison->recommendation == Recommendation::lower);
}

TEST_CASE("audit: errors") {
  PerformanceSample small;
  small.observations.assign(29, 1.0);
  CHECK_THROWS_AS(audit(small), SampleTooSmall);
  PerformanceSample sample;
  sample.observations = draw(NoiseDistribution::gumbel(), 100, 2);
  AuditOptions options;
  options.bootstrap = 10;
  const auto report = audit(sample, options);
  CHECK_FALSE(report.comparison);
  CHECK_THROWS_AS(compare_standard(report, sample.observations, std::nullopt), NoDeclaredStandard);
}

TEST_CASE("audit: the DFR performance distribution passes everyone at its lower bound") {
  PerformanceSample sample;
  sample.observations = draw(NoiseDistribution::erf_dfr(), 100000, 8, 0.5);
  sample.declared_standard = 0.5;
  AuditOptions options;
  options.bootstrap = 20;
  const auto report = audit(sample, options);
  CHECK(report.comparison->pass_fraction.value == 1.0);
  CHECK(report.modal_performance < 0.5 + 3 * report.bandwidth);
}

TEST_CASE("audit: mode estimates converge to the true mode") {
  const auto g = NoiseDistribution::gumbel(1.0, 1.0);
  int hits = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    const auto x = draw(g, 100000, 1000 + rep);
    const double h = silverman_bandwidth(x);
    const auto modes = density_modes(kernel_density(x, h));
    if (std::abs(modes.front().x - 1.0) < 2 * h) ++hits;
  }
  CHECK(hits >= 95);
}

TEST_CASE("audit: sample files") {
  const std::string path = "audit_sample_test.csv";
  {
    std::ofstream out(path);
    out << "performance\n1.5\n2.5\n\n3\n";
  }
  CHECK(read_performance_csv(path).observations == std::vector<double>{1.5, 2.5, 3.0});
  {
    std::ofstream out(path);
    out << "score\n1\n";
  }
  CHECK_THROWS_AS(read_performance_csv(path), ConfigError);
  {
    std::ofstream out(path);
    out << "performance\n1\nabc\n";
  }
  CHECK_THROWS_AS(read_performance_csv(path), ConfigError);
  std::remove(path.c_str());
}
