#pragma once

#include <cstdint>
#include <limits>

namespace infocast::fountain {

// SplitMix64. Small state and a cheap seed, which matters because the index
// set of every encoded packet is regenerated from its 64-bit seed.
class SplitMix64 {
public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t state_;
};

// Deterministic 64-bit combination of two values; used to derive
// per-stream seeds (replications, transmitters, re-encoders).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  SplitMix64 g(a ^ (b * 0xD1B54A32D192ED03ULL + 0x2545F4914F6CDD1DULL));
  g();
  return g();
}

template <class Gen>
double uniform01(Gen &g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n), n > 0. Lemire's multiply-shift with rejection.
template <class Gen>
std::uint32_t bounded(Gen &g, std::uint32_t n) {
  std::uint64_t x = static_cast<std::uint32_t>(g() >> 32);
  std::uint64_t m = x * n;
  auto low = static_cast<std::uint32_t>(m);
  if (low < n) {
    const std::uint32_t threshold = static_cast<std::uint32_t>(-n) % n;
    while (low < threshold) {
      x = static_cast<std::uint32_t>(g() >> 32);
      m = x * n;
      low = static_cast<std::uint32_t>(m);
    }
  }
  return static_cast<std::uint32_t>(m >> 32);
}

} // namespace infocast::fountain
