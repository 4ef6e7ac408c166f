#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace tangle {

/// Deterministic random stream used by every stochastic component.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard.
/// Floating-point and bounded-integer draws are derived here by hand instead
/// of through <random> distributions, whose algorithms differ between
/// standard library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform draw on the open interval (0, 1).
  double uniform_open() {
    // 53 random mantissa bits, shifted off zero by half an ulp.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform index in [0, n). n must be positive.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// Mixes a base seed with a stream index (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream_index);

}  // namespace tangle
