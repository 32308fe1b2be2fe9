#pragma once

// Portable random streams. The standard library distributions are
// implementation-defined, so variates are derived here from raw 64-bit words
// to keep fixed-seed output identical across toolchains.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string_view>

namespace mzi {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream key from a base seed and a path of indices,
/// e.g. (seed, point, batch).
template <class... Indices>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Indices... indices) noexcept {
  std::uint64_t state = seed;
  std::uint64_t key = splitmix64(state);
  ((state = key ^ (static_cast<std::uint64_t>(indices) * 0xD1B54A32D192ED03ULL),
    key = splitmix64(state)),
   ...);
  return key;
}

/// xoshiro256** (period 2^256 - 1), state filled by splitmix64.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;
  static constexpr std::string_view name = "xoshiro256** (splitmix64 seeding)";

  explicit constexpr Xoshiro256(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

 private:
  std::array<std::uint64_t, 4> state_{};
};

/// Uniform on the open interval (0, 1) with 53 random bits.
template <class Rng>
double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal variate by the Box-Muller transform (one of the pair).
template <class Rng>
double standard_normal(Rng& rng) {
  const double u1 = uniform_open01(rng);
  const double u2 = uniform_open01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Uniform integer in [0, n) by rejection, n > 0.
template <class Rng>
std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

}  // namespace mzi
