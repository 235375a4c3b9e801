#pragma once

#include <cmath>
#include <cstdint>

namespace driftbench {

// All randomness in this project flows through the two generators below.
// They are frozen: changing either (or any draw order in the generators)
// changes every seeded stream and invalidates recorded results.
//
//   * splitmix64 — seeding and stream derivation.
//   * xoshiro256** (Blackman & Vigna) — the per-stream generator.
//
// Doubles use the top 53 bits of a 64-bit draw, Gaussians use the Marsaglia
// polar method, and bounded ints use rejection sampling, so every value is
// bit-reproducible for a given seed on any IEEE-754 platform.

inline uint64_t splitmix64(uint64_t& state) noexcept {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives the seed of an independent substream from (seed, stream id).
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) noexcept {
  uint64_t s = seed;
  uint64_t a = splitmix64(s);
  s = a ^ (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL);
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) noexcept {
    uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  uint64_t next_u64() noexcept {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double next_double() noexcept { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform int in [0, bound); bound must be positive.
  int next_int(int bound) noexcept {
    const uint64_t b = uint64_t(bound);
    const uint64_t limit = ~uint64_t(0) - ~uint64_t(0) % b;
    uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return int(x % b);
  }

  /// Standard normal via the polar method (one spare cached).
  double next_gaussian() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, q;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      q = u * u + v * v;
    } while (q >= 1.0 || q == 0.0);
    const double f = std::sqrt(-2.0 * std::log(q) / q);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  static uint64_t rotl(uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  uint64_t state_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace driftbench
