#include "blockham/rng.hpp"

#include <cmath>

namespace blockham {

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index ^ 0x5851f42d4c957f2dULL));
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b) noexcept {
  return stream_seed(stream_seed(master, a), b);
}

std::uint64_t CounterRng::below(std::uint64_t bound) noexcept {
  // Lemire's multiply-and-reject.
  std::uint64_t x = (*this)();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = (*this)();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t geometric_skip(CounterRng& rng, double log1m_p) noexcept {
  const double draw = std::floor(std::log(rng.uniform_pos()) / log1m_p);
  if (!(draw < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(draw);
}

}  // namespace blockham
