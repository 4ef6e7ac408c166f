#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tangle/delay_model.hpp"

namespace tangle {

struct FluidOptions {
  /// Shared step of the time and age axes.
  double step = 0.01;
  /// Reference arrival rate for the early-time floor on l:
  /// l_floor = max(step, 1 / lambda_ref).
  double lambda_ref = 20.0;
  /// Keep g(t, .) every this many time units; 0 keeps none.
  double snapshot_stride = 0.0;
  /// Age axis ends at min(horizon, age_cap_factor * mean delay).
  double age_cap_factor = 40.0;

  double l_floor() const { return step > 1.0 / lambda_ref ? step : 1.0 / lambda_ref; }
};

/// Samples of a function of time on the grid t_k = k * step, k >= 0,
/// read back by linear interpolation.
class UniformHistory {
 public:
  UniformHistory(double step, std::vector<double> values);

  double step() const { return step_; }
  double end_time() const { return step_ * static_cast<double>(values_.size() - 1); }
  const std::vector<double>& values() const { return values_; }

  /// Throws std::domain_error if t lies outside [0, end_time()].
  double at(double t) const;

 private:
  double step_;
  std::vector<double> values_;
};

/// Rate E_H[1{H <= v} * 2 / l(t - H)] at which tips of age v are approved.
///
/// A point-mass delay is a single delayed lookup. Other laws use a composite
/// trapezoid in x with node spacing history.step(), each panel weighted by
/// its exact probability cdf(b) - cdf(a). Values of l below l_floor are
/// raised to it. v may be infinite; only [t - v, t] intersected with the
/// delay support has to be covered by the history, otherwise
/// std::domain_error.
double kernel_eval(const DelayModel& delay, double v, const UniformHistory& history, double t,
                   double l_floor = 0.0);

struct FluidSnapshot {
  double t = 0.0;
  /// g(t, k * step), k = 0 .. min(t / step, age cells).
  std::vector<double> g;
};

/// Discretized tip-age density and rescaled tip count.
struct FluidGrid {
  double step = 0.0;
  double l_floor = 0.0;
  std::size_t age_cells = 0;
  /// l[n] ~ l(n * step).
  std::vector<double> l;
  std::vector<FluidSnapshot> snapshots;
  FluidSnapshot final_profile;
  std::vector<std::string> warnings;

  double horizon() const { return step * static_cast<double>(l.size() - 1); }
  double l_at(double t) const;
};

/// Integrates dg/dt + dg/dv = -g K(t, v) with g(t, 0) = 1 and
/// l(t) = integral_0^t g(t, v) dv, starting from an empty tangle.
///
/// Each cell moves one step along its characteristic and decays by
/// exp(-step * K) with K taken at the characteristic's endpoint. l is the
/// trapezoid integral of the new column.
///
/// Throws std::invalid_argument when step exceeds the mean delay, SolverError
/// on non-finite state. A horizon shorter than the mean delay only warns.
FluidGrid solve_pde(const DelayModel& delay, double horizon, const FluidOptions& options = {});

/// Fixed-delay delay differential system for tips l and free tips x:
///   l' = 1                              for t < h
///   l' = 1 - 2 x(t - h) / l(t - h)      for t >= h
///   x' = 1 - 2 x / l
struct DdeTrajectory {
  double step = 0.0;
  std::vector<double> l;
  std::vector<double> x;

  double horizon() const { return step * static_cast<double>(l.size() - 1); }
  double l_at(double t) const;
};

/// Heun step for l with history interpolation, exact exponential step for x
/// over each interval with l frozen at its mean. Uses the same l floor as
/// solve_pde. Requires step <= h.
DdeTrajectory solve_dde_fixed(double h, double horizon, const FluidOptions& options = {});

}  // namespace tangle
