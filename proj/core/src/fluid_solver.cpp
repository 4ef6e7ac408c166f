#include "tangle/fluid_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tangle/errors.hpp"

namespace tangle {
namespace {

void validate_grid(double step, double horizon, const FluidOptions& options) {
  if (!std::isfinite(step) || step <= 0.0) {
    throw std::invalid_argument("step: must be finite and > 0");
  }
  if (!std::isfinite(horizon) || horizon <= 0.0) {
    throw std::invalid_argument("horizon: must be finite and > 0");
  }
  if (!std::isfinite(options.lambda_ref) || options.lambda_ref <= 0.0) {
    throw std::invalid_argument("lambda_ref: must be finite and > 0");
  }
}

// Where the cdf is 1 to double precision.
double effective_support_upper(const DelayModel& delay) {
  const double upper = delay.support_upper();
  if (std::isfinite(upper)) return upper;
  double x = delay.mean();
  while (1.0 - delay.cdf(x) > 1e-16) x *= 2.0;
  return x;
}

double interpolate(const std::vector<double>& values, double step, double t) {
  const double pos = t / step;
  const auto last = static_cast<double>(values.size() - 1);
  if (pos <= 0.0) return values.front();
  if (pos >= last) return values.back();
  const auto k = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(k);
  if (frac < 1e-9) return values[k];
  return values[k] * (1.0 - frac) + values[k + 1] * frac;
}

[[noreturn]] void report_non_finite(const char* what, std::size_t n, double step,
                                    const std::string& params) {
  std::ostringstream msg;
  msg << what << ": non-finite state at step " << n << " (t = " << step * n
      << ", step = " << step << ", " << params << ")";
  throw SolverError(msg.str());
}

}  // namespace

UniformHistory::UniformHistory(double step, std::vector<double> values)
    : step_(step), values_(std::move(values)) {
  if (!(step_ > 0.0)) throw std::invalid_argument("history step must be > 0");
  if (values_.empty()) throw std::invalid_argument("history is empty");
}

double UniformHistory::at(double t) const {
  const double slack = 1e-9 * step_;
  if (t < -slack || t > end_time() + slack) {
    std::ostringstream msg;
    msg << "history covers [0, " << end_time() << "], queried at " << t;
    throw std::domain_error(msg.str());
  }
  return interpolate(values_, step_, t);
}

double kernel_eval(const DelayModel& delay, double v, const UniformHistory& history, double t,
                   double l_floor) {
  if (!(v >= 0.0)) throw std::domain_error("kernel: age must be >= 0");
  const auto rate = [&](double s) {
    const double l = std::max(history.at(s), l_floor);
    if (!(l > 0.0)) throw std::domain_error("kernel: l history must be positive");
    return 2.0 / l;
  };

  if (const auto h = delay.point_mass()) {
    return v >= *h ? rate(t - *h) : 0.0;
  }

  const double upper = std::min(v, effective_support_upper(delay));
  const double lower = delay.support_lower();
  if (upper <= lower) return 0.0;

  const double step = history.step();
  auto j = static_cast<std::size_t>(std::floor(lower / step));
  double sum = 0.0;
  double a = static_cast<double>(j) * step;
  double cdf_a = delay.cdf(a);
  while (a < upper) {
    ++j;
    const double b = std::min(static_cast<double>(j) * step, upper);
    const double cdf_b = delay.cdf(b);
    const double weight = cdf_b - cdf_a;
    if (weight > 0.0) sum += weight * 0.5 * (rate(t - a) + rate(t - b));
    a = b;
    cdf_a = cdf_b;
  }
  return sum;
}

double FluidGrid::l_at(double t) const { return interpolate(l, step, t); }

double DdeTrajectory::l_at(double t) const { return interpolate(l, step, t); }

FluidGrid solve_pde(const DelayModel& delay, double horizon, const FluidOptions& options) {
  const double step = options.step;
  validate_grid(step, horizon, options);
  const double mean = delay.mean();
  if (step > mean) {
    std::ostringstream msg;
    msg << "step: " << step << " exceeds the mean delay " << mean;
    throw std::invalid_argument(msg.str());
  }

  FluidGrid grid;
  grid.step = step;
  grid.l_floor = options.l_floor();
  if (horizon < mean) {
    grid.warnings.push_back("horizon shorter than the mean delay; stationarity not reached");
  }

  const auto steps = static_cast<std::size_t>(std::llround(horizon / step));
  const double age_span = std::min(horizon, options.age_cap_factor * mean);
  const auto cells = static_cast<std::size_t>(std::floor(age_span / step + 1e-9));
  grid.age_cells = cells;
  const std::size_t snapshot_every =
      options.snapshot_stride > 0.0
          ? std::max<std::size_t>(1, std::llround(options.snapshot_stride / step))
          : 0;

  std::vector<double> g(cells + 1, 0.0);
  std::vector<double> next(cells + 1, 0.0);
  g[0] = 1.0;
  grid.l.assign(steps + 1, 0.0);
  auto& l = grid.l;

  // rates[m] = 2 / max(l[m], floor); the slot for the step being computed
  // holds the previous value as a predictor.
  std::vector<double> rates;
  rates.reserve(steps + 2);
  const auto rate_of = [&](double value) { return 2.0 / std::max(value, grid.l_floor); };
  rates.push_back(rate_of(l[0]));

  const auto point_mass = delay.point_mass();
  std::vector<double> weights;  // weights[j] = P((j-1) step < H <= j step)
  if (!point_mass) {
    weights.assign(cells + 1, 0.0);
    double prev = delay.cdf(0.0);
    for (std::size_t j = 1; j <= cells; ++j) {
      const double cur = delay.cdf(static_cast<double>(j) * step);
      weights[j] = cur - prev;
      prev = cur;
    }
  }

  const std::string params = delay.describe();
  const auto capture = [&](std::size_t n, std::size_t active) {
    grid.snapshots.push_back({step * static_cast<double>(n),
                              std::vector<double>(g.begin(), g.begin() + active + 1)});
  };
  if (snapshot_every) capture(0, 0);

  for (std::size_t n = 0; n < steps; ++n) {
    const std::size_t active = std::min(n + 1, cells);
    const double t_next = step * static_cast<double>(n + 1);
    rates.push_back(rates.back());

    next[0] = 1.0;
    if (point_mass) {
      const double h = *point_mass;
      const double decay = std::exp(-step * rate_of(interpolate(l, step, t_next - h)));
      for (std::size_t a = 1; a <= active; ++a) {
        const bool past_delay = static_cast<double>(a) * step >= h - 1e-9 * step;
        next[a] = past_delay ? g[a - 1] * decay : g[a - 1];
      }
    } else {
      // K at age a step and time t_next, accumulated panel by panel:
      // panel j spans x in [(j-1) step, j step] and pairs rates at
      // t_next - x, i.e. indices n+2-j and n+1-j.
      double kernel = 0.0;
      double decay = 1.0;
      for (std::size_t a = 1; a <= active; ++a) {
        if (weights[a] != 0.0) {
          kernel += weights[a] * 0.5 * (rates[n + 2 - a] + rates[n + 1 - a]);
          decay = std::exp(-step * kernel);
        }
        next[a] = g[a - 1] * decay;
      }
    }
    std::swap(g, next);

    double sum = 0.5 * (g[0] + g[active]);
    for (std::size_t a = 1; a < active; ++a) sum += g[a];
    l[n + 1] = step * sum;
    if (!std::isfinite(l[n + 1])) report_non_finite("solve_pde", n + 1, step, params);
    rates.back() = rate_of(l[n + 1]);

    if (snapshot_every && (n + 1) % snapshot_every == 0) capture(n + 1, active);
  }

  const std::size_t active = std::min(steps, cells);
  grid.final_profile = {step * static_cast<double>(steps),
                        std::vector<double>(g.begin(), g.begin() + active + 1)};
  return grid;
}

DdeTrajectory solve_dde_fixed(double h, double horizon, const FluidOptions& options) {
  const double step = options.step;
  validate_grid(step, horizon, options);
  if (!std::isfinite(h) || h <= 0.0) throw std::invalid_argument("h: must be finite and > 0");
  if (step > h) {
    std::ostringstream msg;
    msg << "step: " << step << " exceeds the delay " << h;
    throw std::invalid_argument(msg.str());
  }

  const double floor = options.l_floor();
  const auto steps = static_cast<std::size_t>(std::llround(horizon / step));
  DdeTrajectory out;
  out.step = step;
  out.l.assign(steps + 1, 0.0);
  out.x.assign(steps + 1, 0.0);
  auto& l = out.l;
  auto& x = out.x;

  // The lagged time is at most the current one because step <= h, so the
  // interpolation only reads filled entries.
  const auto growth = [&](double t) {
    if (t < h - 1e-9 * step) return 1.0;
    const double lag = std::max(0.0, t - h);
    return 1.0 - 2.0 * interpolate(x, step, lag) / std::max(interpolate(l, step, lag), floor);
  };

  for (std::size_t n = 0; n < steps; ++n) {
    const double t = step * static_cast<double>(n);
    l[n + 1] = l[n] + 0.5 * step * (growth(t) + growth(t + step));
    const double l_mean = std::max(0.5 * (l[n] + l[n + 1]), floor);
    const double decay = std::exp(-2.0 * step / l_mean);
    // Exact for x' = 1 - 2x / l_mean.
    x[n + 1] = x[n] * decay + 0.5 * l_mean * (1.0 - decay);
    if (!std::isfinite(l[n + 1]) || !std::isfinite(x[n + 1])) {
      std::ostringstream params;
      params << "h = " << h;
      report_non_finite("solve_dde_fixed", n + 1, step, params.str());
    }
  }
  return out;
}

}  // namespace tangle
