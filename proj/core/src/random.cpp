#include "tangle/random.hpp"

namespace tangle {
namespace {
__extension__ typedef unsigned __int128 uint128;
}  // namespace

std::size_t RandomStream::index(std::size_t n) {
  // Lemire's multiply-shift with rejection; unbiased for any n.
  const std::uint64_t bound = n;
  std::uint64_t x = engine_();
  uint128 m = static_cast<uint128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      x = engine_();
      m = static_cast<uint128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream_index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream_index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace tangle
