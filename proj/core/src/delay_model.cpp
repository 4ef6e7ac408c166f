#include "tangle/delay_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tangle/errors.hpp"

namespace tangle {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_nonnegative_time(double v) {
  if (!(v >= 0.0)) {
    throw std::domain_error("delay evaluated at negative or NaN time");
  }
}

double exponential_integrated_cdf(double mu, double v) {
  const double x = mu * v;
  if (x < 1e-4) {
    // v + (e^{-x} - 1)/mu loses all digits here; use the series x^2/2 - x^3/6.
    return v * x * (0.5 - x / 6.0 + x * x / 24.0);
  }
  return v + std::expm1(-x) / mu;
}

}  // namespace

DelayModel DelayModel::fixed(double h) {
  if (!std::isfinite(h) || h < 0.0) {
    throw std::invalid_argument("fixed delay requires finite h >= 0");
  }
  if (h == 0.0) {
    throw DegenerateDelay("fixed delay h = 0 has zero mean");
  }
  return DelayModel(FixedDelay{h});
}

DelayModel DelayModel::exponential(double mu) {
  if (!std::isfinite(mu) || mu <= 0.0) {
    throw std::invalid_argument("exponential delay requires finite mu > 0");
  }
  return DelayModel(ExponentialDelay{mu});
}

DelayModel DelayModel::uniform(double h0, double h1) {
  if (!std::isfinite(h0) || !std::isfinite(h1) || h0 < 0.0 || h1 < 0.0) {
    throw std::invalid_argument("uniform delay requires finite 0 <= h0 < h1");
  }
  if (h0 == 0.0 && h1 == 0.0) {
    throw DegenerateDelay("uniform delay on [0, 0] has zero mean");
  }
  if (!(h0 < h1)) {
    throw std::invalid_argument("uniform delay requires h0 < h1");
  }
  return DelayModel(UniformDelay{h0, h1});
}

DelayModel DelayModel::custom(std::shared_ptr<const DelayDistribution> law) {
  if (!law) throw std::invalid_argument("custom delay law is null");
  const double m = law->mean();
  if (!std::isfinite(m) || m < 0.0) {
    throw std::invalid_argument("custom delay law has invalid mean");
  }
  if (m == 0.0) throw DegenerateDelay("custom delay law has zero mean");
  return DelayModel(std::move(law));
}

DelayKind DelayModel::kind() const {
  return std::visit(overloaded{
                        [](const FixedDelay&) { return DelayKind::fixed; },
                        [](const ExponentialDelay&) { return DelayKind::exponential; },
                        [](const UniformDelay&) { return DelayKind::uniform; },
                        [](const std::shared_ptr<const DelayDistribution>&) {
                          return DelayKind::custom;
                        },
                    },
                    law_);
}

double DelayModel::sample(RandomStream& rng) const {
  const double u = rng.uniform_open();
  return std::visit(overloaded{
                        [](const FixedDelay& d) { return d.h; },
                        [u](const ExponentialDelay& d) { return -std::log1p(-u) / d.mu; },
                        [u](const UniformDelay& d) { return d.h0 + u * (d.h1 - d.h0); },
                        [u](const std::shared_ptr<const DelayDistribution>& d) {
                          return d->inverse_cdf(u);
                        },
                    },
                    law_);
}

double DelayModel::cdf(double v) const {
  require_nonnegative_time(v);
  return std::visit(overloaded{
                        [v](const FixedDelay& d) { return v >= d.h ? 1.0 : 0.0; },
                        [v](const ExponentialDelay& d) { return -std::expm1(-d.mu * v); },
                        [v](const UniformDelay& d) {
                          if (v <= d.h0) return 0.0;
                          if (v >= d.h1) return 1.0;
                          return (v - d.h0) / (d.h1 - d.h0);
                        },
                        [v](const std::shared_ptr<const DelayDistribution>& d) {
                          return d->cdf(v);
                        },
                    },
                    law_);
}

double DelayModel::integrated_cdf(double v) const {
  require_nonnegative_time(v);
  return std::visit(overloaded{
                        [v](const FixedDelay& d) { return v > d.h ? v - d.h : 0.0; },
                        [v](const ExponentialDelay& d) {
                          return exponential_integrated_cdf(d.mu, v);
                        },
                        [v](const UniformDelay& d) {
                          if (v <= d.h0) return 0.0;
                          if (v <= d.h1) {
                            const double s = v - d.h0;
                            return s * s / (2.0 * (d.h1 - d.h0));
                          }
                          return v - 0.5 * (d.h0 + d.h1);
                        },
                        [v](const std::shared_ptr<const DelayDistribution>& d) {
                          return d->integrated_cdf(v);
                        },
                    },
                    law_);
}

double DelayModel::mean() const {
  return std::visit(overloaded{
                        [](const FixedDelay& d) { return d.h; },
                        [](const ExponentialDelay& d) { return 1.0 / d.mu; },
                        [](const UniformDelay& d) { return 0.5 * (d.h0 + d.h1); },
                        [](const std::shared_ptr<const DelayDistribution>& d) {
                          return d->mean();
                        },
                    },
                    law_);
}

std::optional<double> DelayModel::point_mass() const {
  if (const auto* d = as_fixed()) return d->h;
  return std::nullopt;
}

double DelayModel::support_lower() const {
  return std::visit(overloaded{
                        [](const FixedDelay& d) { return d.h; },
                        [](const ExponentialDelay&) { return 0.0; },
                        [](const UniformDelay& d) { return d.h0; },
                        [](const std::shared_ptr<const DelayDistribution>& d) {
                          return d->support_lower();
                        },
                    },
                    law_);
}

double DelayModel::support_upper() const {
  return std::visit(overloaded{
                        [](const FixedDelay& d) { return d.h; },
                        [](const ExponentialDelay&) {
                          return std::numeric_limits<double>::infinity();
                        },
                        [](const UniformDelay& d) { return d.h1; },
                        [](const std::shared_ptr<const DelayDistribution>& d) {
                          return d->support_upper();
                        },
                    },
                    law_);
}

std::vector<double> DelayModel::breakpoints() const {
  return std::visit(overloaded{
                        [](const FixedDelay& d) { return std::vector<double>{d.h}; },
                        [](const ExponentialDelay&) { return std::vector<double>{}; },
                        [](const UniformDelay& d) {
                          return d.h0 > 0.0 ? std::vector<double>{d.h0, d.h1}
                                            : std::vector<double>{d.h1};
                        },
                        [](const std::shared_ptr<const DelayDistribution>& d) {
                          return d->breakpoints();
                        },
                    },
                    law_);
}

std::string DelayModel::describe() const {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const FixedDelay& d) { out << "fixed(h=" << d.h << ")"; },
                 [&](const ExponentialDelay& d) { out << "exponential(mu=" << d.mu << ")"; },
                 [&](const UniformDelay& d) {
                   out << "uniform(h0=" << d.h0 << ", h1=" << d.h1 << ")";
                 },
                 [&](const std::shared_ptr<const DelayDistribution>& d) {
                   out << d->describe();
                 },
             },
             law_);
  return out.str();
}

bool operator==(const DelayModel& a, const DelayModel& b) {
  if (a.law_.index() != b.law_.index()) return false;
  return std::visit(
      overloaded{
          [&](const FixedDelay& d) { return d.h == std::get<FixedDelay>(b.law_).h; },
          [&](const ExponentialDelay& d) {
            return d.mu == std::get<ExponentialDelay>(b.law_).mu;
          },
          [&](const UniformDelay& d) {
            const auto& o = std::get<UniformDelay>(b.law_);
            return d.h0 == o.h0 && d.h1 == o.h1;
          },
          [&](const std::shared_ptr<const DelayDistribution>& d) {
            return d == std::get<std::shared_ptr<const DelayDistribution>>(b.law_);
          },
      },
      a.law_);
}

}  // namespace tangle
