#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace spavar::rng {

// Counter-based random streams.
//
// Every random draw in this library is a pure function of (seed, stream
// tags..., counter), so any draw is reproducible in isolation and parallel
// scheduling cannot perturb results. The construction is fixed across
// versions and is part of the reproducibility contract:
//
//   mix64(z): the SplitMix64 output permutation (Stafford variant 13)
//       z ^= z >> 30;  z *= 0xbf58476d1ce4e5b9
//       z ^= z >> 27;  z *= 0x94d049bb133111eb
//       z ^= z >> 31
//
//   stream base:   h = mix64(seed ^ 0x9e3779b97f4a7c15)
//                  h = mix64(h ^ tag)        (repeated per tag)
//   k-th draw:     u64 = mix64(h ^ (k + 1))  (k = 0, 1, 2, ...)
//   uniform(0,1):  ((u64 >> 11) + 0.5) * 2^-53   (never exactly 0 or 1)
//
// Gaussians are Box-Muller pairs over two consecutive uniforms.

constexpr std::uint64_t kSeedWhitening = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) noexcept
      : base_(mix64(seed ^ kSeedWhitening)) {}

  /// Derives an independent substream; order of fork calls is significant.
  Stream fork(std::uint64_t tag) const noexcept {
    Stream s(*this);
    s.base_ = mix64(base_ ^ tag);
    s.counter_ = 0;
    s.have_cached_gaussian_ = false;
    return s;
  }

  std::uint64_t next_u64() noexcept { return mix64(base_ ^ ++counter_); }

  /// Uniform on the open interval (0, 1).
  double next_uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool next_bernoulli(double p) noexcept { return next_uniform() < p; }

  /// Standard normal via Box-Muller; consumes two uniforms per pair.
  double next_gaussian() noexcept {
    if (have_cached_gaussian_) {
      have_cached_gaussian_ = false;
      return cached_gaussian_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_gaussian_ = radius * std::sin(angle);
    have_cached_gaussian_ = true;
    return radius * std::cos(angle);
  }

  /// Uniform integer in [0, bound) by rejection from the top of the range,
  /// so the result is exactly unbiased.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % bound;
  }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  double cached_gaussian_ = 0.0;
  bool have_cached_gaussian_ = false;
};

/// Bit pattern of a double, used to fold real-valued grid parameters into
/// stream tags deterministically.
inline std::uint64_t double_bits(double x) noexcept {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(x));
  __builtin_memcpy(&bits, &x, sizeof(bits));
  return bits;
}

}  // namespace spavar::rng
