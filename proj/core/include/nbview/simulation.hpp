#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nbview/vec3.hpp"

namespace nbview {

struct Snapshot;

struct Particle {
  double mass = 0.0;
  double radius = 0.0;  // display only
  Vec3 position;
  Vec3 velocity;

  friend bool operator==(const Particle&, const Particle&) = default;
};

// Direct-summation gravitational N-body system advanced with kick-drift-kick
// leapfrog and Plummer softening.
//
// Not internally synchronized. Concurrent access must go through
// SharedState (steering.hpp), which owns the exclusive guard.
class Simulation {
 public:
  // Throws ParameterError unless dt > 0, G > 0 and softening >= 0, all finite.
  static Simulation create(double dt, double gravity, double softening);

  // Resumes from a captured state. Time, step counter and flags continue
  // from the snapshot. Throws ParameterError on invalid header values.
  static Simulation from_snapshot(const Snapshot& snapshot);

  // Throws ParameterError if the particle is not finite or has negative
  // mass or radius.
  void add(const Particle& particle);

  std::span<const Particle> particles() const { return particles_; }
  std::size_t size() const { return particles_.size(); }

  double time() const { return time_; }
  double dt() const { return dt_; }
  double gravity() const { return gravity_; }
  double softening() const { return softening_; }
  std::uint64_t step_count() const { return step_count_; }
  bool paused() const { return paused_; }

  void set_paused(bool paused) { paused_ = paused; }

  // Any finite non-zero value; a negative dt integrates backwards in time.
  void set_dt(double dt);

  // Advances one leapfrog step of size dt. On SingularConfiguration the
  // simulation is left unchanged.
  void step();

 private:
  Simulation(double dt, double gravity, double softening);

  std::vector<Particle> particles_;
  double time_ = 0.0;
  double dt_;
  double gravity_;
  double softening_;
  std::uint64_t step_count_ = 0;
  bool paused_ = false;

  // Accelerations at the current positions, reused by the next opening kick.
  std::vector<Vec3> accel_cache_;
  bool accel_valid_ = false;
};

// a_i = sum_{j != i} G m_j (x_j - x_i) / (|x_j - x_i|^2 + eps^2)^(3/2), with
// each unordered pair evaluated once and applied to both entries.
std::vector<Vec3> compute_accelerations(const Simulation& sim);

// Kinetic plus softened pairwise potential energy.
double total_energy(const Simulation& sim);

Vec3 total_momentum(const Simulation& sim);

}  // namespace nbview
