#pragma once

#include <functional>

namespace tangle {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Adaptive 7/15-point Gauss-Kronrod integration of f over [a, b].
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate drops below max(abs_tol, rel_tol * |value|) or max_intervals is
/// reached. Breakpoints of f should be interval endpoints.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-13, double rel_tol = 1e-12,
                           int max_intervals = 2000);

}  // namespace tangle
