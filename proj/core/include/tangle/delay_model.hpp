#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tangle/random.hpp"

namespace tangle {

/// Interface for delay laws beyond the three built-in families.
///
/// Implementations must be immutable; a DelayModel holding one is shared
/// freely across threads. Sampling goes through inverse_cdf so that one
/// uniform draw produces one delay.
class DelayDistribution {
 public:
  virtual ~DelayDistribution() = default;

  virtual double inverse_cdf(double u) const = 0;
  virtual double cdf(double v) const = 0;
  /// Integral of cdf over [0, v].
  virtual double integrated_cdf(double v) const = 0;
  virtual double mean() const = 0;

  /// Infimum of the support. Below it the cdf is identically zero.
  virtual double support_lower() const { return 0.0; }
  /// Supremum of the support; infinity when unbounded.
  virtual double support_upper() const { return std::numeric_limits<double>::infinity(); }
  /// Points where the cdf or its derivative is not smooth.
  virtual std::vector<double> breakpoints() const { return {}; }
  virtual std::string describe() const { return "custom"; }
};

struct FixedDelay {
  double h;
};

struct ExponentialDelay {
  double mu;
};

struct UniformDelay {
  double h0;
  double h1;
};

enum class DelayKind { fixed, exponential, uniform, custom };

/// Random proof-of-work delay H. Value type; cheap to copy.
class DelayModel {
 public:
  /// Constructors validate parameters: negative or non-finite values throw
  /// std::invalid_argument, a zero-mean law throws DegenerateDelay.
  static DelayModel fixed(double h);
  static DelayModel exponential(double mu);
  static DelayModel uniform(double h0, double h1);
  static DelayModel custom(std::shared_ptr<const DelayDistribution> law);

  DelayKind kind() const;

  double sample(RandomStream& rng) const;
  /// P(H <= v). Throws std::domain_error for v < 0.
  double cdf(double v) const;
  /// Integral of P(H <= u) over u in [0, v]. Throws std::domain_error for v < 0.
  double integrated_cdf(double v) const;
  double mean() const;

  /// Location of a point mass carrying all the probability, if any.
  std::optional<double> point_mass() const;
  double support_lower() const;
  double support_upper() const;
  std::vector<double> breakpoints() const;

  /// Human-readable form, e.g. "uniform(h0=1, h1=11)".
  std::string describe() const;

  const FixedDelay* as_fixed() const { return std::get_if<FixedDelay>(&law_); }
  const ExponentialDelay* as_exponential() const {
    return std::get_if<ExponentialDelay>(&law_);
  }
  const UniformDelay* as_uniform() const { return std::get_if<UniformDelay>(&law_); }

  friend bool operator==(const DelayModel& a, const DelayModel& b);

 private:
  using Law = std::variant<FixedDelay, ExponentialDelay, UniformDelay,
                           std::shared_ptr<const DelayDistribution>>;
  explicit DelayModel(Law law) : law_(std::move(law)) {}

  Law law_;
};

}  // namespace tangle
