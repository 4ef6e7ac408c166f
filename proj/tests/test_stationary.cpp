#include <cmath>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "tangle/errors.hpp"
#include "tangle/stationary.hpp"

using tangle::DelayModel;

TEST_CASE("profile values") {
  CHECK(tangle::stationary_profile(DelayModel::fixed(5.0), 10.0, 3.0) == 1.0);
  CHECK(tangle::stationary_profile(DelayModel::uniform(1.0, 11.0), 10.0, 0.5) == 1.0);
  // I(10) = 5, so exp(-(2/10) 5).
  CHECK(tangle::stationary_profile(DelayModel::fixed(5.0), 10.0, 10.0) ==
        doctest::Approx(0.36787944117144233).epsilon(1e-14));
  CHECK_THROWS_AS(tangle::stationary_profile(DelayModel::fixed(5.0), 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(tangle::stationary_profile(DelayModel::fixed(5.0), -2.0, 1.0), std::domain_error);
}

TEST_CASE("fixed delay: l = 2h") {
  for (double h : {0.1, 1.0, 5.0, 50.0}) {
    const auto r = tangle::solve_stationary(DelayModel::fixed(h));
    CHECK(std::abs(r.l - 2.0 * h) < 1e-9);
    CHECK(std::abs(oracle::tip_mass(DelayModel::fixed(h), 2.0 * h, 20000) - 2.0 * h) < 1e-6 * h);
  }
}

TEST_CASE("exponential and uniform equilibria") {
  const auto e = tangle::solve_stationary(DelayModel::exponential(0.2));
  CHECK(std::abs(e.l - 1.2839 * 5.0) < 1e-3);
  CHECK(e.sign_changes == 1);
  CHECK(e.residual < 1e-9);
  const auto u = tangle::solve_stationary(DelayModel::uniform(1.0, 11.0));
  CHECK(std::abs(u.l - 10.69) < 1e-2);
  CHECK(u.residual < 1e-9);
}

TEST_CASE("grid-scan oracle agrees with the solver") {
  for (const auto& delay : {DelayModel::exponential(0.2), DelayModel::uniform(1.0, 11.0)}) {
    const double coarse = oracle::scan_stationary_root(delay, 5.0, 20.0, 0.01);
    REQUIRE(std::isfinite(coarse));
    const double fine = oracle::scan_stationary_root(delay, coarse - 0.01, coarse + 0.01, 1e-4);
    REQUIRE(std::isfinite(fine));
    INFO(delay.describe() << ": oracle " << fine);
    CHECK(std::abs(tangle::solve_stationary(delay).l - fine) < 2e-4);
  }
  const double exp_root = oracle::scan_stationary_root(DelayModel::exponential(0.2), 6.40, 6.44, 1e-4);
  CHECK(std::abs(exp_root - 6.4195) < 1e-3);
}

TEST_CASE("tip mass agrees with an independent quadrature") {
  for (const auto& delay : {DelayModel::exponential(0.2), DelayModel::uniform(1.0, 11.0),
                            DelayModel::fixed(5.0)}) {
    for (double l : {3.0, 8.0, 15.0}) {
      // Piecewise between the kinks of all three laws.
      const double cuts[] = {0.0, 1.0, 5.0, 11.0, 40.0, delay.mean() + 20.0 * l};
      double reference = 0.0;
      for (std::size_t i = 0; i + 1 < std::size(cuts); ++i) {
        reference += oracle::integrate(
            [&](double v) { return std::exp(-(2.0 / l) * delay.integrated_cdf(v)); }, cuts[i],
            cuts[i + 1], 1e-12);
      }
      CHECK(tangle::tip_mass(delay, l) == doctest::Approx(reference).epsilon(1e-9));
    }
  }
}

TEST_CASE("scale covariance: l scales with the delay") {
  const double base_exp = tangle::solve_stationary(DelayModel::exponential(0.2)).l;
  const double base_uni = tangle::solve_stationary(DelayModel::uniform(1.0, 11.0)).l;
  for (double c : {0.5, 2.0, 10.0}) {
    CHECK(tangle::solve_stationary(DelayModel::exponential(0.2 / c)).l ==
          doctest::Approx(c * base_exp).epsilon(1e-8));
    CHECK(tangle::solve_stationary(DelayModel::uniform(c, 11.0 * c)).l ==
          doctest::Approx(c * base_uni).epsilon(1e-8));
  }
}

TEST_CASE("uniform closed-form equation matches the generic route") {
  for (auto [h0, h1] : {std::pair{1.0, 11.0}, std::pair{0.0, 4.0}, std::pair{2.0, 3.0}}) {
    const double generic = tangle::solve_stationary(DelayModel::uniform(h0, h1)).l;
    const double special = tangle::solve_uniform_equation(h0, h1);
    INFO(h0 << ".." << h1);
    CHECK(std::abs(generic - special) < 1e-6);
    CHECK(tangle::uniform_equation_rhs(h0, h1, special) == doctest::Approx(special).epsilon(1e-10));
  }
}

TEST_CASE("ordering at the reference parameters and per unit mean") {
  const double e = tangle::solve_stationary(DelayModel::exponential(0.2)).l;
  const double f = tangle::solve_stationary(DelayModel::fixed(5.0)).l;
  const double u = tangle::solve_stationary(DelayModel::uniform(1.0, 11.0)).l;
  CHECK(e < f);
  CHECK(f <= u);
  // Normalized by the mean delay.
  CHECK(e / 5.0 < u / 6.0);
  CHECK(u / 6.0 < f / 5.0);
}

TEST_CASE("residual is within tolerance") {
  for (double tol : {1e-6, 1e-10}) {
    const auto r = tangle::solve_stationary(DelayModel::uniform(1.0, 11.0), tol);
    CHECK(r.residual < tol);
    CHECK(r.iterations > 0);
  }
  CHECK_THROWS_AS(tangle::solve_stationary(DelayModel::fixed(5.0), 0.0), std::invalid_argument);
}

TEST_CASE("predicted tip counts") {
  CHECK(tangle::predict_L(DelayModel::fixed(5.0), 20.0) == doctest::Approx(200.0).epsilon(1e-12));
  CHECK(std::abs(tangle::predict_L(DelayModel::exponential(0.2), 20.0) - 128.39) < 0.02);
  CHECK(std::abs(tangle::predict_L(DelayModel::uniform(1.0, 11.0), 20.0) - 213.8) < 0.2);
  CHECK_THROWS_AS(tangle::predict_L(DelayModel::fixed(5.0), 0.0), std::invalid_argument);
}

TEST_CASE("tabulated profile") {
  const auto r = tangle::solve_stationary(DelayModel::fixed(5.0));
  const auto g = r.tabulate(0.5, 20.0);
  REQUIRE(g.size() == 41);
  CHECK(g[0] == 1.0);
  CHECK(g[10] == 1.0);
  CHECK(g[20] == doctest::Approx(std::exp(-1.0)));
}

namespace {

class BrokenDelay final : public tangle::DelayDistribution {
 public:
  double inverse_cdf(double) const override { return 1.0; }
  double cdf(double v) const override { return v >= 1.0 ? 1.0 : 0.0; }
  double integrated_cdf(double) const override { return std::numeric_limits<double>::quiet_NaN(); }
  double mean() const override { return 1.0; }
};

}  // namespace

TEST_CASE("a law with non-finite integrated cdf cannot be solved") {
  const auto d = DelayModel::custom(std::make_shared<BrokenDelay>());
  CHECK_THROWS_AS(tangle::solve_stationary(d), tangle::SolverError);
}
