#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tourney {

enum class Family {
  exponential,
  gumbel,
  normal,
  logistic,
  uniform,
  pareto,
  erf_dfr,  ///< F(x) = 1 - exp[-x - (sqrt(pi)/2) erf(x)], x >= 0; hazard 1 + exp(-x^2)
  piecewise_linear,
};

std::string to_string(Family family);

struct Support {
  double lower;
  double upper;

  double width() const { return upper - lower; }
  bool contains(double x) const { return x >= lower && x <= upper; }
};

struct Knot {
  double x;
  double density;
};

namespace detail {
class Model;
}

/// Distribution of the additive shock X in performance Y = e + X.
///
/// Immutable value type; copies share the underlying model, so instances can
/// be passed freely across threads. Piecewise-linear densities are accepted
/// unnormalized and rescaled to unit mass; `normalization_factor()` reports
/// the original mass.
class NoiseDistribution {
 public:
  static NoiseDistribution exponential(double rate = 1.0);
  static NoiseDistribution gumbel(double location = 0.0, double scale = 1.0);
  static NoiseDistribution normal(double mean = 0.0, double sd = 1.0);
  static NoiseDistribution logistic(double location = 0.0, double scale = 1.0);
  static NoiseDistribution uniform(double lower = 0.0, double upper = 1.0);
  static NoiseDistribution pareto(double shape, double scale = 1.0);
  static NoiseDistribution erf_dfr();
  static NoiseDistribution piecewise_linear(std::vector<Knot> knots);

  Family family() const;
  std::string name() const;
  /// Family parameters by name, as accepted by the JSON reader.
  std::map<std::string, double> params() const;
  /// Knots as supplied (unnormalized); empty for closed-form families.
  std::span<const Knot> knots() const;

  Support support() const;
  /// Support clipped to the [tail, 1 - tail] quantiles where it is infinite.
  Support truncated_support(double tail = 1e-10) const;
  /// Points where the density is not differentiable (knots of piecewise inputs).
  std::span<const double> kinks() const;
  /// Kinks plus a fixed set of quantiles; breakpoints for integrals against f.
  std::span<const double> integration_breaks() const;
  double normalization_factor() const;

  double pdf(double x) const;
  /// Density before renormalization; equals pdf() for closed-form families.
  double unnormalized_pdf(double x) const;
  double cdf(double x) const;
  double survival(double x) const;
  /// Right derivative of the density.
  double pdf_slope(double x) const;
  double quantile(double u) const;

  /// True when pdf(upper) is zero within 1e-8 (holds for every unbounded support).
  bool upper_density_vanishes() const;
  /// Warnings collected while validating the model (e.g. pdf(upper) != 0).
  std::span<const std::string> warnings() const;

 private:
  explicit NoiseDistribution(std::shared_ptr<const detail::Model> model);
  std::shared_ptr<const detail::Model> model_;
};

/// h(x) = f(x) / (1 - F(x)). Throws SurvivalUnderflow if 1 - F(x) < 1e-300.
double hazard(const NoiseDistribution& d, double x);

/// lambda(x) = -f'(x) / f(x) using the right derivative at kinks.
/// Throws ZeroDensity where f(x) == 0.
double likelihood_ratio(const NoiseDistribution& d, double x);

/// CDF of X_(j:n), the (n+1-j)-th highest of n i.i.d. draws, i.e. the j-th
/// lowest. j == 0 is the degenerate statistic at -infinity (CDF identically 1).
double order_statistic_cdf(const NoiseDistribution& d, int j, int n, double x);

/// Density of X_(j:n) for 1 <= j <= n.
double order_statistic_pdf(const NoiseDistribution& d, int j, int n, double x);

// ---------------------------------------------------------------------------
// Shape analytics

enum class HazardClass { ifr, dfr, constant, mixed };
enum class LogClass { log_concave, log_convex, neither };

std::string to_string(HazardClass c);
std::string to_string(LogClass c);

struct Mode {
  double x;
  double density;
  bool boundary = false;
};

struct ShapeReport {
  /// Distinct modes in decreasing order of location (m_1 > ... > m_K).
  std::vector<Mode> modes;
  /// Largest global maximizer of the density.
  double global_mode = 0.0;
  HazardClass hazard_class = HazardClass::mixed;
  LogClass log_class = LogClass::neither;
  /// Mode locations t such that the density is IFR on {x > t}.
  std::vector<double> ifr_above;
  /// Grid step used for mode detection.
  double grid_step = 0.0;
};

struct ShapeOptions {
  /// Grid spacing as a fraction of the (truncated) support width.
  double grid_fraction = 2e-4;
  double tail = 1e-10;
  double plateau_tol = 1e-9;
  double monotone_tol = 1e-9;
  std::size_t max_modes = 64;
};

/// Evaluation grid over the truncated support: uniform points plus kinks.
std::vector<double> shape_grid(const NoiseDistribution& d, const ShapeOptions& options = {});

/// Locates every distinct mode on the evaluation grid. A plateau counts once,
/// at its rightmost point. The lower (upper) boundary is listed only when the
/// density falls (rises) monotonically into it and attains the global maximum
/// there, so boundary bumps below an interior peak are not reported.
ShapeReport find_modes(const NoiseDistribution& d, const ShapeOptions& options = {});

/// Monotonicity of the hazard rate on {x > above} (whole support by default).
HazardClass classify_hazard(const NoiseDistribution& d, std::optional<double> above = std::nullopt,
                            const ShapeOptions& options = {});

/// Sign of the discrete second difference of log f on the grid. Densities
/// that are log-affine (exponential, uniform) are reported as log-concave.
LogClass classify_log_shape(const NoiseDistribution& d, const ShapeOptions& options = {});

}  // namespace tourney
