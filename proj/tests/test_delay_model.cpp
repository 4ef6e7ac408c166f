#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tangle/delay_model.hpp"
#include "tangle/errors.hpp"

using tangle::DelayModel;

namespace {

std::vector<DelayModel> reference_laws() {
  return {DelayModel::fixed(5.0), DelayModel::exponential(0.2), DelayModel::uniform(1.0, 11.0)};
}

double empirical_mean(const DelayModel& d, std::size_t n, std::uint64_t seed) {
  tangle::RandomStream rng(seed);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += d.sample(rng);
  return sum / static_cast<double>(n);
}

// v with cdf(v) = p, by bisection on the closed-form cdf.
double cdf_inverse(const DelayModel& d, double p) {
  double lo = 0.0;
  double hi = 1.0;
  while (d.cdf(hi) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (d.cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("sampling matches the law") {
  tangle::RandomStream rng(7);
  CHECK(DelayModel::fixed(5.0).sample(rng) == 5.0);
  CHECK(empirical_mean(DelayModel::exponential(0.2), 1'000'000, 11) ==
        doctest::Approx(5.0).epsilon(0.02 / 5.0));
  CHECK(empirical_mean(DelayModel::uniform(1.0, 11.0), 1'000'000, 12) ==
        doctest::Approx(6.0).epsilon(0.02 / 6.0));
}

TEST_CASE("identical seeds yield identical draws") {
  for (const auto& d : reference_laws()) {
    tangle::RandomStream a(99);
    tangle::RandomStream b(99);
    for (int i = 0; i < 1000; ++i) REQUIRE(d.sample(a) == d.sample(b));
  }
}

TEST_CASE("cdf closed forms") {
  const auto fixed = DelayModel::fixed(5.0);
  CHECK(fixed.cdf(4.9) == 0.0);
  CHECK(fixed.cdf(5.0) == 1.0);
  CHECK(DelayModel::uniform(1.0, 11.0).cdf(6.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(DelayModel::exponential(0.2).cdf(5.0) ==
        doctest::Approx(0.6321205588285577).epsilon(1e-14));
  CHECK_THROWS_AS(fixed.cdf(-1.0), std::domain_error);
}

TEST_CASE("integrated cdf closed forms") {
  CHECK(DelayModel::uniform(1.0, 11.0).integrated_cdf(6.0) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(DelayModel::fixed(5.0).integrated_cdf(7.0) == doctest::Approx(2.0).epsilon(1e-15));
  // 5 e^{-1}
  CHECK(DelayModel::exponential(0.2).integrated_cdf(5.0) ==
        doctest::Approx(1.8393972058572117).epsilon(1e-14));
  CHECK(DelayModel::exponential(0.2).integrated_cdf(0.0) == 0.0);
  CHECK_THROWS_AS(DelayModel::uniform(1.0, 11.0).integrated_cdf(-0.5), std::domain_error);
}

TEST_CASE("integrated cdf agrees with quadrature of the cdf") {
  for (const auto& d : reference_laws()) {
    for (double v : {0.0, 0.3, 1.0, 4.99, 5.0, 5.5, 6.0, 10.0, 11.0, 17.3, 40.0, 120.0}) {
      const double quad = oracle::integrate([&](double u) { return d.cdf(u); }, 0.0, v, 1e-11);
      INFO(d.describe() << " at v = " << v);
      CHECK(std::abs(d.integrated_cdf(v) - quad) < 1e-9);
    }
  }
}

TEST_CASE("cdf and integrated cdf shape invariants") {
  for (const auto& d : reference_laws()) {
    CHECK(d.mean() > 0.0);
    CHECK(d.cdf(0.0) >= 0.0);
    CHECK(d.cdf(1e4) == doctest::Approx(1.0));
    CHECK(d.integrated_cdf(0.0) == 0.0);
    double prev_cdf = 0.0;
    double prev_int = 0.0;
    double prev_slope = 0.0;
    const double dv = 0.05;
    for (int k = 1; k <= 800; ++k) {
      const double v = k * dv;
      const double c = d.cdf(v);
      const double I = d.integrated_cdf(v);
      REQUIRE(c >= prev_cdf);
      REQUIRE(I >= prev_int);
      // Convexity: secant slopes do not decrease.
      const double slope = (I - prev_int) / dv;
      REQUIRE(slope >= prev_slope - 1e-12);
      prev_cdf = c;
      prev_int = I;
      prev_slope = slope;
    }
  }
}

TEST_CASE("tail identity: integrated cdf approaches v - mean") {
  for (const auto& d : reference_laws()) {
    const double v = 1000.0 * d.mean();
    CHECK(std::abs(d.integrated_cdf(v) - (v - d.mean())) < 1e-9);
  }
}

TEST_CASE("empirical cdf matches at 20 quantile points") {
  for (const auto& d : {DelayModel::exponential(0.2), DelayModel::uniform(1.0, 11.0)}) {
    tangle::RandomStream rng(2024);
    std::vector<double> xs(100'000);
    for (auto& x : xs) x = d.sample(rng);
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double p = k / 21.0;
      const double v = cdf_inverse(d, p);
      const auto below = std::upper_bound(xs.begin(), xs.end(), v) - xs.begin();
      ks = std::max(ks, std::abs(static_cast<double>(below) / xs.size() - d.cdf(v)));
    }
    INFO(d.describe());
    CHECK(ks < 0.01);
  }
}

TEST_CASE("construction rejects invalid and degenerate parameters") {
  CHECK_THROWS_AS(DelayModel::fixed(0.0), tangle::DegenerateDelay);
  CHECK_THROWS_AS(DelayModel::uniform(0.0, 0.0), tangle::DegenerateDelay);
  CHECK_THROWS_AS(DelayModel::fixed(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(DelayModel::fixed(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(DelayModel::exponential(0.0), std::invalid_argument);
  CHECK_THROWS_AS(DelayModel::uniform(3.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(DelayModel::uniform(5.0, 1.0), std::invalid_argument);
  CHECK_NOTHROW(DelayModel::uniform(0.0, 2.0));
}

namespace {

// Triangular law on [0, 2] with mode 1, as an extension example.
class TriangularDelay final : public tangle::DelayDistribution {
 public:
  double inverse_cdf(double u) const override {
    return u < 0.5 ? std::sqrt(2.0 * u) : 2.0 - std::sqrt(2.0 * (1.0 - u));
  }
  double cdf(double v) const override {
    if (v <= 0.0) return 0.0;
    if (v <= 1.0) return 0.5 * v * v;
    if (v <= 2.0) return 1.0 - 0.5 * (2.0 - v) * (2.0 - v);
    return 1.0;
  }
  double integrated_cdf(double v) const override {
    if (v <= 1.0) return v * v * v / 6.0;
    if (v <= 2.0) return v - 1.0 + (2.0 - v) * (2.0 - v) * (2.0 - v) / 6.0;
    return v - 1.0;
  }
  double mean() const override { return 1.0; }
  double support_upper() const override { return 2.0; }
  std::vector<double> breakpoints() const override { return {1.0, 2.0}; }
};

}  // namespace

TEST_CASE("custom laws plug in through the extension interface") {
  const auto d = DelayModel::custom(std::make_shared<TriangularDelay>());
  CHECK(d.kind() == tangle::DelayKind::custom);
  CHECK(d.integrated_cdf(3.0) == doctest::Approx(2.0));
  CHECK(empirical_mean(d, 200'000, 5) == doctest::Approx(1.0).epsilon(0.01));
  for (double v : {0.5, 1.0, 1.7, 2.5}) {
    const double quad = oracle::integrate([&](double u) { return d.cdf(u); }, 0.0, v, 1e-11);
    CHECK(std::abs(d.integrated_cdf(v) - quad) < 1e-9);
  }
}
