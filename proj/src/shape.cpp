#include <algorithm>
#include <cmath>
#include <sstream>

#include "tourney/dist.hpp"
#include "tourney/errors.hpp"

namespace tourney {
namespace {

struct Plateau {
  std::size_t first;
  std::size_t last;
};

// Golden-section search for a maximum of the density inside [a, b].
double refine_peak(const NoiseDistribution& d, double a, double b) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = d.pdf(x1);
  double f2 = d.pdf(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = d.pdf(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = d.pdf(x1);
    }
  }
  return 0.5 * (a + b);
}

bool nonincreasing(std::span<const double> v, double tol, bool relative) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double scale = relative ? std::max({1.0, std::abs(v[i]), std::abs(v[i + 1])}) : 1.0;
    if (v[i + 1] - v[i] > tol * scale) return false;
  }
  return true;
}

bool nondecreasing(std::span<const double> v, double tol, bool relative) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double scale = relative ? std::max({1.0, std::abs(v[i]), std::abs(v[i + 1])}) : 1.0;
    if (v[i] - v[i + 1] > tol * scale) return false;
  }
  return true;
}

}  // namespace

std::string to_string(HazardClass c) {
  switch (c) {
    case HazardClass::ifr: return "IFR";
    case HazardClass::dfr: return "DFR";
    case HazardClass::constant: return "constant";
    case HazardClass::mixed: return "mixed";
  }
  return "unknown";
}

std::string to_string(LogClass c) {
  switch (c) {
    case LogClass::log_concave: return "log-concave";
    case LogClass::log_convex: return "log-convex";
    case LogClass::neither: return "neither";
  }
  return "unknown";
}

std::vector<double> shape_grid(const NoiseDistribution& d, const ShapeOptions& options) {
  const Support s = d.truncated_support(options.tail);
  const auto intervals = static_cast<std::size_t>(std::ceil(1.0 / options.grid_fraction));
  std::vector<double> grid;
  grid.reserve(intervals + 1 + d.kinks().size());
  for (std::size_t i = 0; i <= intervals; ++i) {
    grid.push_back(i == intervals ? s.upper
                                  : s.lower + s.width() * static_cast<double>(i) / intervals);
  }
  for (double k : d.kinks()) {
    if (k > s.lower && k < s.upper) grid.push_back(k);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

ShapeReport find_modes(const NoiseDistribution& d, const ShapeOptions& options) {
  const std::vector<double> grid = shape_grid(d, options);
  std::vector<double> f(grid.size());
  std::transform(grid.begin(), grid.end(), f.begin(), [&](double x) { return d.pdf(x); });

  std::vector<Plateau> plateaus;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!plateaus.empty() && std::abs(f[i] - f[plateaus.back().last]) <= options.plateau_tol) {
      plateaus.back().last = i;
    } else {
      plateaus.push_back({i, i});
    }
  }

  const bool smooth = d.kinks().empty() && d.family() != Family::uniform;
  std::vector<Mode> interior;
  std::vector<Mode> boundary;
  for (std::size_t k = 0; k < plateaus.size(); ++k) {
    const Plateau& p = plateaus[k];
    const bool left_lower = k == 0 || f[p.first - 1] < f[p.first];
    const bool right_lower = k + 1 == plateaus.size() || f[p.last + 1] < f[p.last];
    if (!left_lower || !right_lower || f[p.last] <= 0.0) continue;

    const bool at_lower = k == 0;
    const bool at_upper = k + 1 == plateaus.size();
    Mode mode{grid[p.last], f[p.last], at_lower || at_upper};
    if (!mode.boundary && smooth && p.first == p.last) {
      mode.x = refine_peak(d, grid[p.first - 1], grid[p.first + 1]);
      mode.density = d.pdf(mode.x);
    }
    (mode.boundary ? boundary : interior).push_back(mode);
  }

  double peak = 0.0;
  for (const Mode& m : interior) peak = std::max(peak, m.density);
  for (const Mode& m : boundary) peak = std::max(peak, m.density);

  ShapeReport report;
  report.modes = interior;
  for (const Mode& m : boundary) {
    if (m.density >= peak - options.plateau_tol) report.modes.push_back(m);
  }
  if (report.modes.size() > options.max_modes) {
    std::ostringstream msg;
    msg << "find_modes: " << report.modes.size() << " modes exceed the cap of " << options.max_modes;
    throw TooManyModes(msg.str());
  }
  std::sort(report.modes.begin(), report.modes.end(),
            [](const Mode& a, const Mode& b) { return a.x > b.x; });

  // Modes are sorted right to left, so the first one at the peak is the largest maximizer.
  for (const Mode& m : report.modes) {
    if (m.density >= peak - options.plateau_tol) {
      report.global_mode = m.x;
      break;
    }
  }
  report.grid_step = d.truncated_support(options.tail).width() * options.grid_fraction;
  report.hazard_class = classify_hazard(d, std::nullopt, options);
  report.log_class = classify_log_shape(d, options);
  for (const Mode& m : report.modes) {
    const HazardClass c = classify_hazard(d, m.x, options);
    if (c == HazardClass::ifr || c == HazardClass::constant) report.ifr_above.push_back(m.x);
  }
  return report;
}

HazardClass classify_hazard(const NoiseDistribution& d, std::optional<double> above,
                            const ShapeOptions& options) {
  const std::vector<double> grid = shape_grid(d, options);
  std::vector<double> h;
  for (double x : grid) {
    if (above && !(x > *above)) continue;
    if (d.survival(x) < 1e-300 || x >= d.support().upper) continue;
    h.push_back(hazard(d, x));
  }
  const bool inc = nondecreasing(h, options.monotone_tol, true);
  const bool dec = nonincreasing(h, options.monotone_tol, true);
  if (inc && dec) return HazardClass::constant;
  if (inc) return HazardClass::ifr;
  if (dec) return HazardClass::dfr;
  return HazardClass::mixed;
}

LogClass classify_log_shape(const NoiseDistribution& d, const ShapeOptions& options) {
  const std::vector<double> grid = shape_grid(d, options);
  std::vector<double> xs;
  std::vector<double> logf;
  for (double x : grid) {
    const double f = d.pdf(x);
    if (f > 1e-300) {
      xs.push_back(x);
      logf.push_back(std::log(f));
    }
  }
  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    slopes.push_back((logf[i + 1] - logf[i]) / (xs[i + 1] - xs[i]));
  }
  // Slope differences carry roundoff of order eps * |log f| / dx.
  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    scale = std::max(scale, std::max(std::abs(logf[i]), 1.0) / (xs[i + 1] - xs[i]));
  }
  const double tol = std::max(options.monotone_tol, 64.0 * 2.2e-16 * scale);
  if (nonincreasing(slopes, tol, false)) return LogClass::log_concave;
  if (nondecreasing(slopes, tol, false)) return LogClass::log_convex;
  return LogClass::neither;
}

}  // namespace tourney
