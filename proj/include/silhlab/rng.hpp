#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "silhlab/geom.hpp"

namespace silhlab {

/// splitmix64 finalizer; bijective on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: draw j of stream (seed, stream) is a pure function
/// of (seed, stream, j). Parallel consumers each open their own stream, so
/// results do not depend on thread count or interleaving.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix64(mix64(seed + kGamma) ^ mix64(stream + 0x6a09e667f3bcc909ULL))) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix64(state_);
  }

  /// Uniform in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

/// Uniform on the unit sphere: z uniform in [-1, 1], azimuth uniform.
inline Direction sample_direction_uniform(Rng& rng) {
  double z = 2.0 * rng.next_double() - 1.0;
  double phi = 2.0 * kPi * rng.next_double();
  double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Direction(Vec3{rho * std::cos(phi), rho * std::sin(phi), z});
}

/// Uniform in the solid ball: uniform direction scaled by radius * u^(1/3).
inline Vec3 sample_ball_uniform(const Vec3& center, double radius, Rng& rng) {
  if (!(radius > 0.0)) throw std::invalid_argument("sample_ball_uniform: radius must be positive");
  Direction d = sample_direction_uniform(rng);
  double r = radius * std::cbrt(rng.next_double());
  return center + r * d.vec();
}

}  // namespace silhlab
