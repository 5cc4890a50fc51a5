#pragma once

#include <functional>
#include <span>

namespace tourney {

struct QuadratureOptions {
  double abs_tol = 1e-9;
  double rel_tol = 0.0;
  int max_intervals = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of `fn` over [a, b].
///
/// The interval is first split at every breakpoint lying strictly inside
/// (a, b); kinks of piecewise integrands should be passed here since they
/// spoil the smooth-integrand error estimate. The interval with the largest
/// error estimate is bisected until the summed error meets
/// max(abs_tol, rel_tol * |value|). Throws QuadratureFailure otherwise.
QuadratureResult integrate(const std::function<double(double)>& fn, double a, double b,
                           std::span<const double> breakpoints = {},
                           const QuadratureOptions& options = {});

}  // namespace tourney
