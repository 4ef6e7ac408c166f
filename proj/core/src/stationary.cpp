#include "tangle/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tangle/errors.hpp"
#include "tangle/quadrature.hpp"

namespace tangle {
namespace {

// Integrand cutoff for the infinite integral.
constexpr double kTailCutoff = 1e-14;

struct Bracket {
  double lo;
  double hi;
  int sign_changes;
};

// Finds [lo, hi] with G(lo) > 0 > G(hi), starting from [start_lo, start_hi]
// and widening geometrically, then counts sign changes on a uniform scan.
Bracket find_bracket(const std::function<double(double)>& G, double start_lo,
                     double start_hi) {
  double lo = start_lo;
  double hi = start_hi;
  int widen = 0;
  while (G(lo) <= 0.0) {
    lo *= 0.5;
    if (++widen > 60) {
      throw SolverError("stationary: no lower bracket found down to l = " + std::to_string(lo));
    }
  }
  widen = 0;
  while (G(hi) >= 0.0) {
    hi *= 2.0;
    if (++widen > 60) {
      throw SolverError("stationary: no upper bracket found up to l = " + std::to_string(hi));
    }
  }

  constexpr int kScan = 64;
  int changes = 0;
  double prev = G(lo);
  for (int k = 1; k <= kScan; ++k) {
    const double x = lo + (hi - lo) * k / kScan;
    const double cur = G(x);
    if ((prev > 0.0) != (cur > 0.0)) ++changes;
    prev = cur;
  }
  if (changes != 1) {
    std::ostringstream msg;
    msg << "stationary: bracket [" << lo << ", " << hi << "] holds " << changes
        << " sign changes of F(l) - l";
    throw SolverError(msg.str());
  }
  return {lo, hi, changes};
}

struct Root {
  double x;
  int iterations;
};

Root bisect(const std::function<double(double)>& G, double lo, double hi, double tol) {
  int iterations = 0;
  while (hi - lo > std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * hi) &&
         iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    if (G(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++iterations;
  }
  return {0.5 * (lo + hi), iterations};
}

}  // namespace

double stationary_profile(const DelayModel& delay, double l, double v) {
  if (!(l > 0.0)) throw std::domain_error("stationary profile requires l > 0");
  return std::exp(-(2.0 / l) * delay.integrated_cdf(v));
}

double tip_mass(const DelayModel& delay, double l) {
  if (!(l > 0.0)) throw std::domain_error("tip mass requires l > 0");
  // g(v) <= exp(-(2/l)(v - mean)), so past this point the integrand is below
  // the cutoff.
  const double end = delay.mean() + 0.5 * l * std::log(1.0 / kTailCutoff);
  std::vector<double> cuts{0.0};
  for (double b : delay.breakpoints()) {
    if (b > 0.0 && b < end) cuts.push_back(b);
  }
  cuts.push_back(std::max(end, cuts.back()));
  std::sort(cuts.begin(), cuts.end());

  const auto g = [&](double v) { return stationary_profile(delay, l, v); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate(g, cuts[i], cuts[i + 1], 1e-14, 1e-14).value;
  }
  return total;
}

double StationaryResult::profile(double v) const { return stationary_profile(delay, l, v); }

std::vector<double> StationaryResult::tabulate(double step, double v_max) const {
  if (!(step > 0.0)) throw std::invalid_argument("tabulate: step must be > 0");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor(v_max / step + 1e-9));
  out.reserve(count + 1);
  for (std::size_t k = 0; k <= count; ++k) out.push_back(profile(static_cast<double>(k) * step));
  return out;
}

StationaryResult solve_stationary(const DelayModel& delay, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("stationary: tolerance must be > 0");
  const double mean = delay.mean();
  if (!(mean > 0.0)) throw DegenerateDelay("stationary: delay has zero mean");

  StationaryResult result{delay};
  if (const auto h = delay.point_mass()) {
    result.l = 2.0 * *h;
    result.residual = std::abs(tip_mass(delay, result.l) - result.l);
    result.iterations = 0;
    return result;
  }

  const auto G = [&](double l) { return tip_mass(delay, l) - l; };
  const Bracket bracket = find_bracket(G, mean, 4.0 * mean);
  // |G'| <= 1 near the root, so a bracket of width tol bounds the residual.
  const Root root = bisect(G, bracket.lo, bracket.hi, tol);
  result.l = root.x;
  result.iterations = root.iterations;
  result.sign_changes = bracket.sign_changes;
  result.residual = std::abs(G(root.x));
  if (!std::isfinite(result.residual)) {
    throw SolverError("stationary: non-finite residual at l = " + std::to_string(root.x));
  }
  return result;
}

double uniform_equation_rhs(double h0, double h1, double l) {
  if (!(l > 0.0)) throw std::domain_error("uniform equation requires l > 0");
  const double beta2 = h1 - h0;
  const double beta = std::sqrt(beta2);
  const double root_l = std::sqrt(l);
  const double gaussian_part =
      beta * 0.5 * std::sqrt(std::numbers::pi) * root_l * std::erf(beta / root_l);
  return h0 + 0.5 * l * std::exp(-beta2 / l) + gaussian_part;
}

double solve_uniform_equation(double h0, double h1, double tol) {
  // Validates the parameters.
  const DelayModel delay = DelayModel::uniform(h0, h1);
  const auto G = [&](double l) { return uniform_equation_rhs(h0, h1, l) - l; };
  const Bracket bracket = find_bracket(G, delay.mean(), 4.0 * delay.mean());
  return bisect(G, bracket.lo, bracket.hi, tol).x;
}

double predict_L(const DelayModel& delay, double lambda, double tol) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw std::invalid_argument("lambda: must be finite and > 0");
  }
  return lambda * solve_stationary(delay, tol).l;
}

}  // namespace tangle
