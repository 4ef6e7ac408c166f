#pragma once

#include <vector>

#include "tangle/delay_model.hpp"

namespace tangle {

/// Equilibrium of the fluid model: rescaled tip count l and age profile g.
struct StationaryResult {
  DelayModel delay;
  double l = 0.0;
  /// |l - integral of g| at the returned l.
  double residual = 0.0;
  int iterations = 0;
  /// Sign changes of F(l) - l seen on the final bracket (1 when unique).
  int sign_changes = 1;

  double profile(double v) const;
  /// g(k * step) for k = 0 .. floor(v_max / step).
  std::vector<double> tabulate(double step, double v_max) const;
};

/// g(v) = exp(-(2/l) * integral_0^v P(H <= u) du). Throws std::domain_error
/// for l <= 0 or v < 0.
double stationary_profile(const DelayModel& delay, double l, double v);

/// F(l) = integral of stationary_profile(delay, l, .) over [0, inf). The
/// equilibrium is the fixed point F(l) = l.
double tip_mass(const DelayModel& delay, double l);

/// Fixed delay returns the closed form l = 2h. Other laws solve F(l) = l by
/// bisection on a bracket starting at [mean, 4 mean].
///
/// Throws SolverError if no bracket is found or the bracket holds more than
/// one sign change.
StationaryResult solve_stationary(const DelayModel& delay, double tol = 1e-10);

/// Right-hand side of the uniform-delay equation for l with beta^2 = h1 - h0:
/// h0 + (l/2) e^{-beta^2/l} + beta * integral_0^beta e^{-w^2/l} dw.
double uniform_equation_rhs(double h0, double h1, double l);

/// Root of l = uniform_equation_rhs(h0, h1, l); an independent route to the
/// uniform-delay equilibrium.
double solve_uniform_equation(double h0, double h1, double tol = 1e-12);

/// Expected stationary tip count L = lambda * l.
double predict_L(const DelayModel& delay, double lambda, double tol = 1e-10);

}  // namespace tangle
