#include "tourney/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "tourney/errors.hpp"

namespace tourney {
namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Segment& x, const Segment& y) const { return x.error < y.error; }
};

Segment kronrod15(const std::function<double(double)>& fn, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = fn(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = fn(center - dx) + fn(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& fn, double a, double b,
                           std::span<const double> breakpoints, const QuadratureOptions& options) {
  if (!(a < b)) return {};
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw QuadratureFailure("integrate: bounds must be finite");
  }

  std::vector<double> edges{a};
  for (double p : breakpoints) {
    if (p > a && p < b) edges.push_back(p);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<Segment, std::vector<Segment>, ByError> queue;
  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Segment s = kronrod15(fn, edges[i], edges[i + 1]);
    total += s.value;
    error += s.error;
    queue.push(s);
  }

  auto target = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };
  while (error > target()) {
    if (!std::isfinite(total) || !std::isfinite(error)) {
      throw QuadratureFailure("integrate: non-finite integrand value");
    }
    if (static_cast<int>(queue.size()) >= options.max_intervals) {
      std::ostringstream msg;
      msg << "integrate: error estimate " << error << " above target " << target()
          << " after " << queue.size() << " intervals on [" << a << ", " << b << "]";
      throw QuadratureFailure(msg.str());
    }
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval can no longer be split in floating point; accept it.
      error -= worst.error;
      worst.error = 0.0;
      queue.push(worst);
      continue;
    }
    Segment left = kronrod15(fn, worst.a, mid);
    Segment right = kronrod15(fn, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }

  if (!std::isfinite(total)) throw QuadratureFailure("integrate: non-finite integrand value");

  // Re-sum to shed the drift accumulated by incremental updates.
  QuadratureResult result;
  result.intervals = static_cast<int>(queue.size());
  while (!queue.empty()) {
    result.value += queue.top().value;
    result.error += queue.top().error;
    queue.pop();
  }
  return result;
}

}  // namespace tourney
