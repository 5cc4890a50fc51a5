#include "tourney/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "tourney/errors.hpp"

namespace tourney {

namespace detail {

class Model {
 public:
  virtual ~Model() = default;

  virtual Family family() const = 0;
  virtual std::map<std::string, double> params() const = 0;
  virtual Support support() const = 0;
  // The four functions below are only called for x inside the support.
  virtual double pdf(double x) const = 0;
  virtual double cdf(double x) const = 0;
  virtual double survival(double x) const = 0;
  virtual double pdf_slope(double x) const = 0;
  virtual double quantile(double u) const = 0;

  virtual std::span<const double> kinks() const { return {}; }
  virtual std::span<const Knot> knots() const { return {}; }
  virtual double normalization() const { return 1.0; }

  std::vector<std::string> warnings;
  std::vector<double> breaks;
};

}  // namespace detail

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidDistribution(what);
}

class Exponential final : public detail::Model {
 public:
  explicit Exponential(double rate) : rate_(rate) {
    require(rate > 0 && std::isfinite(rate), "exponential: rate must be positive");
  }
  Family family() const override { return Family::exponential; }
  std::map<std::string, double> params() const override { return {{"rate", rate_}}; }
  Support support() const override { return {0.0, kInf}; }
  double pdf(double x) const override { return rate_ * std::exp(-rate_ * x); }
  double cdf(double x) const override { return -std::expm1(-rate_ * x); }
  double survival(double x) const override { return std::exp(-rate_ * x); }
  double pdf_slope(double x) const override { return -rate_ * pdf(x); }
  double quantile(double u) const override { return -std::log1p(-u) / rate_; }

 private:
  double rate_;
};

class Gumbel final : public detail::Model {
 public:
  Gumbel(double location, double scale) : mu_(location), beta_(scale) {
    require(scale > 0 && std::isfinite(scale) && std::isfinite(location),
            "gumbel: scale must be positive and location finite");
  }
  Family family() const override { return Family::gumbel; }
  std::map<std::string, double> params() const override {
    return {{"location", mu_}, {"scale", beta_}};
  }
  Support support() const override { return {-kInf, kInf}; }
  double pdf(double x) const override {
    const double z = (x - mu_) / beta_;
    return std::exp(-(z + std::exp(-z))) / beta_;
  }
  double cdf(double x) const override { return std::exp(-std::exp(-(x - mu_) / beta_)); }
  double survival(double x) const override { return -std::expm1(-std::exp(-(x - mu_) / beta_)); }
  double pdf_slope(double x) const override {
    const double z = (x - mu_) / beta_;
    return pdf(x) * std::expm1(-z) / beta_;
  }
  double quantile(double u) const override { return mu_ - beta_ * std::log(-std::log(u)); }

 private:
  double mu_;
  double beta_;
};

class Normal final : public detail::Model {
 public:
  Normal(double mean, double sd) : mu_(mean), sigma_(sd) {
    require(sd > 0 && std::isfinite(sd) && std::isfinite(mean),
            "normal: sd must be positive and mean finite");
  }
  Family family() const override { return Family::normal; }
  std::map<std::string, double> params() const override { return {{"mean", mu_}, {"sd", sigma_}}; }
  Support support() const override { return {-kInf, kInf}; }
  double pdf(double x) const override {
    const double z = (x - mu_) / sigma_;
    return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * std::numbers::pi));
  }
  double cdf(double x) const override {
    return 0.5 * std::erfc(-(x - mu_) / (sigma_ * std::numbers::sqrt2));
  }
  double survival(double x) const override {
    return 0.5 * std::erfc((x - mu_) / (sigma_ * std::numbers::sqrt2));
  }
  double pdf_slope(double x) const override { return -(x - mu_) / (sigma_ * sigma_) * pdf(x); }
  double quantile(double u) const override {
    return mu_ - sigma_ * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
  }

 private:
  double mu_;
  double sigma_;
};

class Logistic final : public detail::Model {
 public:
  Logistic(double location, double scale) : mu_(location), s_(scale) {
    require(scale > 0 && std::isfinite(scale) && std::isfinite(location),
            "logistic: scale must be positive and location finite");
  }
  Family family() const override { return Family::logistic; }
  std::map<std::string, double> params() const override {
    return {{"location", mu_}, {"scale", s_}};
  }
  Support support() const override { return {-kInf, kInf}; }
  double pdf(double x) const override {
    const double c = std::cosh(0.5 * (x - mu_) / s_);
    return 1.0 / (4.0 * s_ * c * c);
  }
  double cdf(double x) const override { return 1.0 / (1.0 + std::exp(-(x - mu_) / s_)); }
  double survival(double x) const override { return 1.0 / (1.0 + std::exp((x - mu_) / s_)); }
  double pdf_slope(double x) const override {
    return -pdf(x) * std::tanh(0.5 * (x - mu_) / s_) / s_;
  }
  double quantile(double u) const override { return mu_ + s_ * (std::log(u) - std::log1p(-u)); }

 private:
  double mu_;
  double s_;
};

class Uniform final : public detail::Model {
 public:
  Uniform(double lower, double upper) : a_(lower), b_(upper) {
    require(std::isfinite(lower) && std::isfinite(upper) && lower < upper,
            "uniform: need finite lower < upper");
  }
  Family family() const override { return Family::uniform; }
  std::map<std::string, double> params() const override { return {{"lower", a_}, {"upper", b_}}; }
  Support support() const override { return {a_, b_}; }
  double pdf(double) const override { return 1.0 / (b_ - a_); }
  double cdf(double x) const override { return (x - a_) / (b_ - a_); }
  double survival(double x) const override { return (b_ - x) / (b_ - a_); }
  double pdf_slope(double) const override { return 0.0; }
  double quantile(double u) const override { return a_ + u * (b_ - a_); }

 private:
  double a_;
  double b_;
};

class Pareto final : public detail::Model {
 public:
  Pareto(double shape, double scale) : alpha_(shape), scale_(scale) {
    require(shape > 0 && scale > 0 && std::isfinite(shape) && std::isfinite(scale),
            "pareto: shape and scale must be positive");
  }
  Family family() const override { return Family::pareto; }
  std::map<std::string, double> params() const override {
    return {{"shape", alpha_}, {"scale", scale_}};
  }
  Support support() const override { return {scale_, kInf}; }
  double pdf(double x) const override { return alpha_ / scale_ * std::pow(scale_ / x, alpha_ + 1.0); }
  double cdf(double x) const override { return -std::expm1(alpha_ * std::log(scale_ / x)); }
  double survival(double x) const override { return std::pow(scale_ / x, alpha_); }
  double pdf_slope(double x) const override { return -(alpha_ + 1.0) / x * pdf(x); }
  double quantile(double u) const override { return scale_ * std::pow(1.0 - u, -1.0 / alpha_); }

 private:
  double alpha_;
  double scale_;
};

// Cumulative hazard G(x) = x + (sqrt(pi)/2) erf(x), so F = 1 - exp(-G) and h = G' = 1 + exp(-x^2).
class ErfDfr final : public detail::Model {
 public:
  Family family() const override { return Family::erf_dfr; }
  std::map<std::string, double> params() const override { return {}; }
  Support support() const override { return {0.0, kInf}; }
  double pdf(double x) const override { return hazard(x) * survival(x); }
  double cdf(double x) const override { return -std::expm1(-cumulative_hazard(x)); }
  double survival(double x) const override { return std::exp(-cumulative_hazard(x)); }
  double pdf_slope(double x) const override {
    const double h = hazard(x);
    const double dh = -2.0 * x * std::exp(-x * x);
    return survival(x) * (dh - h * h);
  }
  double quantile(double u) const override {
    const double target = -std::log1p(-u);
    // G(x) - x lies in [0, sqrt(pi)/2], which brackets the root.
    double lo = std::max(0.0, target - 0.5 * std::sqrt(std::numbers::pi));
    double hi = target;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
      const double residual = cumulative_hazard(x) - target;
      if (residual > 0) hi = x; else lo = x;
      double next = x - residual / hazard(x);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) return next;
      x = next;
    }
    return x;
  }

 private:
  static double hazard(double x) { return 1.0 + std::exp(-x * x); }
  static double cumulative_hazard(double x) {
    return x + 0.5 * std::sqrt(std::numbers::pi) * std::erf(x);
  }
};

class PiecewiseLinear final : public detail::Model {
 public:
  explicit PiecewiseLinear(std::vector<Knot> knots) : knots_(std::move(knots)) {
    require(knots_.size() >= 2, "piecewise_linear: need at least two knots");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
      require(std::isfinite(knots_[i].x) && std::isfinite(knots_[i].density),
              "piecewise_linear: knots must be finite");
      require(knots_[i].density >= 0, "piecewise_linear: densities must be nonnegative");
      if (i > 0) require(knots_[i].x > knots_[i - 1].x, "piecewise_linear: knot x must increase");
    }
    const std::size_t m = knots_.size();
    below_.assign(m, 0.0);
    above_.assign(m, 0.0);
    for (std::size_t i = 1; i < m; ++i) below_[i] = below_[i - 1] + segment_mass(i - 1);
    for (std::size_t i = m - 1; i-- > 0;) above_[i] = above_[i + 1] + segment_mass(i);
    mass_ = below_.back();
    require(mass_ > 0, "piecewise_linear: density has zero mass");
    for (std::size_t i = 1; i + 1 < m; ++i) kinks_.push_back(knots_[i].x);
  }

  Family family() const override { return Family::piecewise_linear; }
  std::map<std::string, double> params() const override { return {}; }
  Support support() const override { return {knots_.front().x, knots_.back().x}; }
  std::span<const double> kinks() const override { return kinks_; }
  std::span<const Knot> knots() const override { return knots_; }
  double normalization() const override { return mass_; }

  double pdf(double x) const override {
    const std::size_t i = segment(x);
    return (knots_[i].density + slope(i) * (x - knots_[i].x)) / mass_;
  }
  double cdf(double x) const override {
    const std::size_t i = segment(x);
    return std::min(1.0, (below_[i] + partial_mass(i, x)) / mass_);
  }
  double survival(double x) const override {
    const std::size_t i = segment(x);
    return std::max(0.0, (above_[i + 1] + segment_mass(i) - partial_mass(i, x)) / mass_);
  }
  double pdf_slope(double x) const override { return slope(segment(x)) / mass_; }
  double quantile(double u) const override {
    const double target = u * mass_;
    auto it = std::upper_bound(below_.begin(), below_.end(), target);
    std::size_t i = it == below_.begin() ? 0 : static_cast<std::size_t>(it - below_.begin()) - 1;
    i = std::min(i, knots_.size() - 2);
    const double need = target - below_[i];
    const double f0 = knots_[i].density;
    const double s = slope(i);
    // Solve f0*dx + s*dx^2/2 = need for the root inside the segment.
    const double disc = std::max(0.0, f0 * f0 + 2.0 * s * need);
    double dx = f0 + std::sqrt(disc) > 0 ? 2.0 * need / (f0 + std::sqrt(disc)) : 0.0;
    const double width = knots_[i + 1].x - knots_[i].x;
    return knots_[i].x + std::clamp(dx, 0.0, width);
  }

 private:
  std::size_t segment(double x) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                               [](double v, const Knot& k) { return v < k.x; });
    std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
    return std::min(i, knots_.size() - 2);
  }
  double slope(std::size_t i) const {
    return (knots_[i + 1].density - knots_[i].density) / (knots_[i + 1].x - knots_[i].x);
  }
  double segment_mass(std::size_t i) const {
    return 0.5 * (knots_[i].density + knots_[i + 1].density) * (knots_[i + 1].x - knots_[i].x);
  }
  double partial_mass(std::size_t i, double x) const {
    const double dx = x - knots_[i].x;
    return dx * (knots_[i].density + 0.5 * slope(i) * dx);
  }

  std::vector<Knot> knots_;
  std::vector<double> below_;
  std::vector<double> above_;
  std::vector<double> kinks_;
  double mass_ = 0.0;
};

std::shared_ptr<detail::Model> finish(std::shared_ptr<detail::Model> model) {
  const Support s = model->support();
  // Quantile anchors keep adaptive quadrature from stepping over mass that a
  // heavy tail squeezes into a small corner of a wide truncated support.
  model->breaks.assign(model->kinks().begin(), model->kinks().end());
  for (double u : {1e-6, 1e-3, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999, 1 - 1e-5, 1 - 1e-7}) {
    model->breaks.push_back(model->quantile(u));
  }
  std::sort(model->breaks.begin(), model->breaks.end());
  if (std::isfinite(s.upper) && model->pdf(s.upper) > 1e-8) {
    std::ostringstream msg;
    msg << to_string(model->family()) << ": density at the upper bound is "
        << model->pdf(s.upper) << ", not zero";
    model->warnings.push_back(msg.str());
  }
  return model;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::exponential: return "exponential";
    case Family::gumbel: return "gumbel";
    case Family::normal: return "normal";
    case Family::logistic: return "logistic";
    case Family::uniform: return "uniform";
    case Family::pareto: return "pareto";
    case Family::erf_dfr: return "erf_dfr";
    case Family::piecewise_linear: return "piecewise_linear";
  }
  return "unknown";
}

NoiseDistribution::NoiseDistribution(std::shared_ptr<const detail::Model> model)
    : model_(std::move(model)) {}

NoiseDistribution NoiseDistribution::exponential(double rate) {
  return NoiseDistribution(finish(std::make_shared<Exponential>(rate)));
}
NoiseDistribution NoiseDistribution::gumbel(double location, double scale) {
  return NoiseDistribution(finish(std::make_shared<Gumbel>(location, scale)));
}
NoiseDistribution NoiseDistribution::normal(double mean, double sd) {
  return NoiseDistribution(finish(std::make_shared<Normal>(mean, sd)));
}
NoiseDistribution NoiseDistribution::logistic(double location, double scale) {
  return NoiseDistribution(finish(std::make_shared<Logistic>(location, scale)));
}
NoiseDistribution NoiseDistribution::uniform(double lower, double upper) {
  return NoiseDistribution(finish(std::make_shared<Uniform>(lower, upper)));
}
NoiseDistribution NoiseDistribution::pareto(double shape, double scale) {
  return NoiseDistribution(finish(std::make_shared<Pareto>(shape, scale)));
}
NoiseDistribution NoiseDistribution::erf_dfr() {
  return NoiseDistribution(finish(std::make_shared<ErfDfr>()));
}
NoiseDistribution NoiseDistribution::piecewise_linear(std::vector<Knot> knots) {
  return NoiseDistribution(finish(std::make_shared<PiecewiseLinear>(std::move(knots))));
}

Family NoiseDistribution::family() const { return model_->family(); }
std::string NoiseDistribution::name() const { return to_string(model_->family()); }
std::map<std::string, double> NoiseDistribution::params() const { return model_->params(); }
std::span<const Knot> NoiseDistribution::knots() const { return model_->knots(); }
Support NoiseDistribution::support() const { return model_->support(); }
std::span<const double> NoiseDistribution::kinks() const { return model_->kinks(); }
std::span<const double> NoiseDistribution::integration_breaks() const { return model_->breaks; }
double NoiseDistribution::normalization_factor() const { return model_->normalization(); }
std::span<const std::string> NoiseDistribution::warnings() const { return model_->warnings; }

Support NoiseDistribution::truncated_support(double tail) const {
  Support s = support();
  if (!std::isfinite(s.lower)) s.lower = quantile(tail);
  if (!std::isfinite(s.upper)) s.upper = quantile(1.0 - tail);
  return s;
}

double NoiseDistribution::pdf(double x) const {
  const Support s = support();
  if (!(x >= s.lower && x <= s.upper)) return 0.0;
  return model_->pdf(x);
}

double NoiseDistribution::unnormalized_pdf(double x) const {
  return pdf(x) * model_->normalization();
}

double NoiseDistribution::cdf(double x) const {
  const Support s = support();
  if (x <= s.lower) return 0.0;
  if (x >= s.upper) return 1.0;
  return model_->cdf(x);
}

double NoiseDistribution::survival(double x) const {
  const Support s = support();
  if (x <= s.lower) return 1.0;
  if (x >= s.upper) return 0.0;
  return model_->survival(x);
}

double NoiseDistribution::pdf_slope(double x) const {
  const Support s = support();
  if (!(x >= s.lower && x <= s.upper)) return 0.0;
  return model_->pdf_slope(x);
}

double NoiseDistribution::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw InvalidInput("quantile: probability outside [0, 1]");
  const Support s = support();
  if (u == 0.0) return s.lower;
  if (u == 1.0) return s.upper;
  return model_->quantile(u);
}

bool NoiseDistribution::upper_density_vanishes() const {
  const Support s = support();
  return !std::isfinite(s.upper) || model_->pdf(s.upper) <= 1e-8;
}

double hazard(const NoiseDistribution& d, double x) {
  const double s = d.survival(x);
  if (s < 1e-300) {
    std::ostringstream msg;
    msg << "hazard: survival " << s << " underflows at x = " << x;
    throw SurvivalUnderflow(msg.str());
  }
  return d.pdf(x) / s;
}

double likelihood_ratio(const NoiseDistribution& d, double x) {
  const double f = d.pdf(x);
  if (!(f > 0.0)) {
    std::ostringstream msg;
    msg << "likelihood_ratio: zero density at x = " << x;
    throw ZeroDensity(msg.str());
  }
  return -d.pdf_slope(x) / f;
}

double order_statistic_cdf(const NoiseDistribution& d, int j, int n, double x) {
  if (n < 1 || j < 0 || j > n) {
    std::ostringstream msg;
    msg << "order_statistic_cdf: rank " << j << " outside 0.." << n;
    throw RankOutOfRange(msg.str());
  }
  if (j == 0) return 1.0;
  const double F = d.cdf(x);
  const double S = d.survival(x);
  double total = 0.0;
  for (int k = j; k <= n; ++k) total += binomial(n, k) * std::pow(F, k) * std::pow(S, n - k);
  return std::min(1.0, total);
}

double order_statistic_pdf(const NoiseDistribution& d, int j, int n, double x) {
  if (n < 1 || j < 1 || j > n) {
    std::ostringstream msg;
    msg << "order_statistic_pdf: rank " << j << " outside 1.." << n;
    throw RankOutOfRange(msg.str());
  }
  const double f = d.pdf(x);
  if (f == 0.0) return 0.0;
  return n * binomial(n - 1, j - 1) * std::pow(d.cdf(x), j - 1) * std::pow(d.survival(x), n - j) * f;
}

}  // namespace tourney
