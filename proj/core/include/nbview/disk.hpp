#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>

#include "nbview/simulation.hpp"

namespace nbview {

// Self-gravitating disk around a central mass. Surface density follows
// r^(-3/2) between r_min and r_max.
struct DiskParams {
  double central_mass = 1.0;
  double disk_mass = 0.01;
  double r_min = 0.4;
  double r_max = 4.0;
  double aspect = 0.05;  // |z| <= aspect * r
  std::uint64_t seed = 1;

  double gravity = 1.0;
  double softening = 0.02;
  double dt = 2.0 * std::numbers::pi * 1e-3;
};

inline constexpr double kCentralRadius = 0.1;
inline constexpr double kDiskParticleRadius = 0.02;

// splitmix64 (Steele, Lea, Flood 2014). Constants are part of the
// reproducibility contract of the disk generator.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  constexpr double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Central particle at the origin followed by n disk particles on circular
// orbits. Per disk particle three uniforms are drawn in order: radius,
// azimuth, height. Throws ParameterError on invalid parameters or n == 0.
Simulation init_selfgravitating_disk(std::size_t n, const DiskParams& params = {});

}  // namespace nbview
