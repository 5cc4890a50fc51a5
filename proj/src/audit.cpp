#include "tourney/audit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tourney/errors.hpp"
#include "tourney/parallel.hpp"
#include "tourney/rng.hpp"

namespace tourney {
namespace {

double sample_quantile(std::vector<double> x, double p) {
  std::sort(x.begin(), x.end());
  const double pos = p * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

// Location of the highest grid value, refined by a parabola through its neighbours.
double peak_location(const KernelDensity& kde, std::size_t i) {
  if (i == 0 || i + 1 >= kde.grid.size()) return kde.grid[i];
  const double a = kde.density[i - 1];
  const double b = kde.density[i];
  const double c = kde.density[i + 1];
  const double denom = a - 2.0 * b + c;
  const double step = kde.grid[1] - kde.grid[0];
  if (denom >= 0.0) return kde.grid[i];
  return kde.grid[i] + 0.5 * (a - c) / denom * step;
}

double global_mode(const KernelDensity& kde) {
  const auto it = std::max_element(kde.density.begin(), kde.density.end());
  return peak_location(kde, static_cast<std::size_t>(it - kde.density.begin()));
}

}  // namespace

PerformanceSample read_performance_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sample file " + path);
  PerformanceSample sample;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("sample file " + path + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "performance") throw ConfigError("sample file " + path + ": header must be 'performance'");
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != line.size() || !std::isfinite(value)) {
      std::ostringstream msg;
      msg << "sample file " << path << ", line " << row << ": not a finite number";
      throw ConfigError(msg.str());
    }
    sample.observations.push_back(value);
  }
  return sample;
}

double silverman_bandwidth(const std::vector<double>& x) {
  if (x.size() < 2) throw SampleTooSmall("bandwidth needs at least two observations");
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const double iqr = sample_quantile(x, 0.75) - sample_quantile(x, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;
  if (!(spread > 0.0)) throw NumericFailure("bandwidth: sample has no spread");
  return 0.9 * spread * std::pow(n, -0.2);
}

KernelDensity kernel_density(const std::vector<double>& x, double bandwidth, std::size_t points) {
  if (x.empty()) throw SampleTooSmall("kernel density needs observations");
  if (!(bandwidth > 0.0)) throw InvalidInput("kernel density: bandwidth must be positive");
  if (points < 16) throw InvalidInput("kernel density: need at least 16 grid points");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it - 4.0 * bandwidth;
  const double hi = *hi_it + 4.0 * bandwidth;
  const double step = (hi - lo) / static_cast<double>(points - 1);

  std::vector<double> counts(points, 0.0);
  for (double v : x) {
    const double pos = (v - lo) / step;
    const auto i = std::min(static_cast<std::size_t>(pos), points - 2);
    const double frac = pos - static_cast<double>(i);
    counts[i] += 1.0 - frac;
    counts[i + 1] += frac;
  }

  const auto half = static_cast<std::ptrdiff_t>(std::ceil(5.0 * bandwidth / step));
  std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
  const double norm = 1.0 / (static_cast<double>(x.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  for (std::ptrdiff_t k = -half; k <= half; ++k) {
    const double z = static_cast<double>(k) * step / bandwidth;
    kernel[static_cast<std::size_t>(k + half)] = norm * std::exp(-0.5 * z * z);
  }

  KernelDensity kde;
  kde.bandwidth = bandwidth;
  kde.grid.resize(points);
  kde.density.assign(points, 0.0);
  const auto m = static_cast<std::ptrdiff_t>(points);
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    kde.grid[static_cast<std::size_t>(i)] = lo + static_cast<double>(i) * step;
    double acc = 0.0;
    const std::ptrdiff_t from = std::max<std::ptrdiff_t>(0, i - half);
    const std::ptrdiff_t to = std::min<std::ptrdiff_t>(m - 1, i + half);
    for (std::ptrdiff_t j = from; j <= to; ++j) {
      acc += counts[static_cast<std::size_t>(j)] * kernel[static_cast<std::size_t>(j - i + half)];
    }
    kde.density[static_cast<std::size_t>(i)] = acc;
  }
  return kde;
}

std::vector<DensityMode> density_modes(const KernelDensity& kde, double min_relative) {
  const double top = *std::max_element(kde.density.begin(), kde.density.end());
  std::vector<DensityMode> modes;
  const std::size_t m = kde.density.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double f = kde.density[i];
    const bool left = i == 0 || kde.density[i - 1] < f;
    const bool right = i + 1 == m || kde.density[i + 1] <= f;
    if (left && right && f >= min_relative * top) modes.push_back({peak_location(kde, i), f});
  }
  std::sort(modes.begin(), modes.end(),
            [](const DensityMode& a, const DensityMode& b) { return a.density > b.density; });
  return modes;
}

std::string to_string(Recommendation r) {
  switch (r) {
    case Recommendation::raise: return "raise";
    case Recommendation::lower: return "lower";
    case Recommendation::keep: return "keep";
  }
  return "unknown";
}

StandardComparison compare_standard(const AuditReport& report, const std::vector<double>& x,
                                    std::optional<double> standard) {
  if (!standard) throw NoDeclaredStandard("no declared standard to compare with the modal performance");
  StandardComparison cmp;
  cmp.standard = *standard;
  if (cmp.standard < report.ci_low) {
    cmp.recommendation = Recommendation::raise;
  } else if (cmp.standard > report.ci_high) {
    cmp.recommendation = Recommendation::lower;
  }
  std::size_t passes = 0;
  for (double v : x) passes += v >= cmp.standard ? 1 : 0;
  const double n = static_cast<double>(x.size());
  const double p = static_cast<double>(passes) / n;
  cmp.pass_fraction = {p, std::sqrt(p * (1.0 - p) / n)};
  return cmp;
}

AuditReport audit(const PerformanceSample& sample, const AuditOptions& options) {
  const std::vector<double>& x = sample.observations;
  if (x.size() < 30) {
    std::ostringstream msg;
    msg << "audit needs at least 30 observations, got " << x.size();
    throw SampleTooSmall(msg.str());
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw InvalidInput("audit: observations must be finite");
  }
  if (options.bootstrap < 1) throw InvalidInput("audit: need at least one bootstrap resample");
  if (!(options.confidence > 0.0 && options.confidence < 1.0)) {
    throw InvalidInput("audit: confidence must lie in (0, 1)");
  }

  AuditReport report;
  report.observations = x.size();
  report.bandwidth = options.bandwidth ? *options.bandwidth : silverman_bandwidth(x);
  const KernelDensity kde = kernel_density(x, report.bandwidth, options.grid_points);
  report.modes = density_modes(kde);
  report.modal_performance = global_mode(kde);

  const CounterRng rng(options.seed);
  std::vector<double> boot(static_cast<std::size_t>(options.bootstrap));
  parallel_for(boot.size(), [&](std::size_t b) {
    std::vector<double> resample(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto j = static_cast<std::size_t>(rng.uniform(b, i) * static_cast<double>(x.size()));
      resample[i] = x[std::min(j, x.size() - 1)];
    }
    boot[b] = global_mode(kernel_density(resample, report.bandwidth, options.grid_points));
  }, options.workers);
  const double alpha = 0.5 * (1.0 - options.confidence);
  report.ci_low = sample_quantile(boot, alpha);
  report.ci_high = sample_quantile(boot, 1.0 - alpha);

  report.note =
      "with symmetric unimodal noise and the standard at the mode, about 50% of performers pass";
  if (sample.declared_standard) report.comparison = compare_standard(report, x, sample.declared_standard);
  return report;
}

}  // namespace tourney
