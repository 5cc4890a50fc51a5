#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tourney/oracle.hpp"

namespace tourney {

struct PerformanceSample {
  std::vector<double> observations;
  std::optional<double> declared_standard;
  std::vector<std::string> groups;
};

/// Reads one observation per line under the header `performance`.
PerformanceSample read_performance_csv(const std::string& path);

struct KernelDensity {
  double bandwidth = 0.0;
  std::vector<double> grid;
  std::vector<double> density;
};

/// 0.9 * min(sd, IQR / 1.34) * n^{-1/5}.
double silverman_bandwidth(const std::vector<double>& x);

/// Gaussian KDE on `points` evenly spaced grid points (linear binning).
KernelDensity kernel_density(const std::vector<double>& x, double bandwidth, std::size_t points = 4096);

struct DensityMode {
  double x = 0.0;
  double density = 0.0;
};

/// Local maxima of the estimate whose height is at least `min_relative` of
/// the tallest, in decreasing order of height.
std::vector<DensityMode> density_modes(const KernelDensity& kde, double min_relative = 0.05);

enum class Recommendation { raise, lower, keep };
std::string to_string(Recommendation r);

struct StandardComparison {
  double standard = 0.0;
  Recommendation recommendation = Recommendation::keep;
  Estimate pass_fraction;
};

struct AuditOptions {
  std::optional<double> bandwidth;
  int bootstrap = 1000;
  double confidence = 0.95;
  std::size_t grid_points = 4096;
  std::uint64_t seed = 1;
  std::size_t workers = 0;
};

struct AuditReport {
  std::size_t observations = 0;
  double bandwidth = 0.0;
  std::vector<DensityMode> modes;
  double modal_performance = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::optional<StandardComparison> comparison;
  std::string note;
};

/// Nonparametric mode of the performance distribution with a bootstrap
/// confidence interval, plus a comparison to the declared standard when one is
/// given. SampleTooSmall below 30 observations.
AuditReport audit(const PerformanceSample& sample, const AuditOptions& options = {});

/// Raise the standard if it sits below the modal interval, lower it if above.
/// NoDeclaredStandard when `standard` is empty.
StandardComparison compare_standard(const AuditReport& report, const std::vector<double>& x,
                                    std::optional<double> standard);

}  // namespace tourney
