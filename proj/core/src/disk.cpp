#include "nbview/disk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nbview/errors.hpp"

namespace nbview {

namespace {

void validate(std::size_t n, const DiskParams& p) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (n == 0) throw ParameterError("disk needs at least one particle");
  if (!finite(p.central_mass) || p.central_mass < 0.0)
    throw ParameterError("central_mass must be finite and non-negative");
  if (!finite(p.disk_mass) || p.disk_mass < 0.0)
    throw ParameterError("disk_mass must be finite and non-negative");
  if (!finite(p.r_min) || !finite(p.r_max) || !(p.r_min > 0.0) ||
      !(p.r_min < p.r_max))
    throw ParameterError("require 0 < r_min < r_max");
  if (!finite(p.aspect) || p.aspect < 0.0)
    throw ParameterError("aspect must be finite and non-negative");
}

}  // namespace

Simulation init_selfgravitating_disk(std::size_t n, const DiskParams& params) {
  validate(n, params);
  Simulation sim = Simulation::create(params.dt, params.gravity, params.softening);

  sim.add(Particle{.mass = params.central_mass, .radius = kCentralRadius, .position = {}, .velocity = {}});

  SplitMix64 rng(params.seed);
  const double sqrt_min = std::sqrt(params.r_min);
  const double sqrt_max = std::sqrt(params.r_max);
  const double mass = params.disk_mass / static_cast<double>(n);
  const double gm = params.gravity * params.central_mass;

  for (std::size_t k = 0; k < n; ++k) {
    const double u_r = rng.uniform();
    const double u_phi = rng.uniform();
    const double u_z = rng.uniform();

    // Inverse CDF of the mass enclosed under Sigma(r) ~ r^(-3/2).
    const double s = sqrt_min + u_r * (sqrt_max - sqrt_min);
    const double r = std::clamp(s * s, params.r_min, params.r_max);
    const double phi = 2.0 * std::numbers::pi * u_phi;
    const double z = params.aspect * r * (2.0 * u_z - 1.0);
    const double v = std::sqrt(gm / r);
    const double c = std::cos(phi);
    const double sn = std::sin(phi);

    sim.add(Particle{
        .mass = mass,
        .radius = kDiskParticleRadius,
        .position = {r * c, r * sn, z},
        .velocity = {-v * sn, v * c, 0.0},
    });
  }
  return sim;
}

}  // namespace nbview
