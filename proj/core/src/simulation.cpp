#include "nbview/simulation.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "gravity_kernel.hpp"
#include "nbview/errors.hpp"
#include "nbview/snapshot.hpp"

namespace nbview {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace

Simulation::Simulation(double dt, double gravity, double softening)
    : dt_(dt), gravity_(gravity), softening_(softening) {}

Simulation Simulation::create(double dt, double gravity, double softening) {
  require(std::isfinite(dt) && dt > 0.0, "dt must be finite and positive");
  require(std::isfinite(gravity) && gravity > 0.0,
          "G must be finite and positive");
  require(std::isfinite(softening) && softening >= 0.0,
          "softening must be finite and non-negative");
  return Simulation(dt, gravity, softening);
}

Simulation Simulation::from_snapshot(const Snapshot& snapshot) {
  const SimHeader& h = snapshot.header;
  require(std::isfinite(h.dt) && h.dt != 0.0, "dt must be finite and non-zero");
  require(std::isfinite(h.gravity) && h.gravity > 0.0,
          "G must be finite and positive");
  require(std::isfinite(h.softening) && h.softening >= 0.0,
          "softening must be finite and non-negative");
  require(std::isfinite(h.time), "time must be finite");
  require(h.particle_count == snapshot.particles.size(),
          "header particle count does not match records");

  Simulation sim(h.dt, h.gravity, h.softening);
  sim.particles_.reserve(snapshot.particles.size());
  for (const Particle& p : snapshot.particles) sim.add(p);
  sim.time_ = h.time;
  sim.step_count_ = h.step_count;
  sim.paused_ = (h.flags & kFlagPaused) != 0;
  return sim;
}

void Simulation::add(const Particle& p) {
  require(std::isfinite(p.mass) && p.mass >= 0.0,
          "particle mass must be finite and non-negative");
  require(std::isfinite(p.radius) && p.radius >= 0.0,
          "particle radius must be finite and non-negative");
  require(is_finite(p.position) && is_finite(p.velocity),
          "particle position and velocity must be finite");
  particles_.push_back(p);
  accel_valid_ = false;
}

void Simulation::set_dt(double dt) {
  require(std::isfinite(dt) && dt != 0.0, "dt must be finite and non-zero");
  dt_ = dt;
}

void Simulation::step() {
  const std::size_t n = particles_.size();
  if (!accel_valid_) {
    accel_cache_.resize(n);
    detail::pairwise_accelerations(particles_, gravity_, softening_,
                                   accel_cache_);
    accel_valid_ = true;
  }

  const double half_dt = 0.5 * dt_;
  std::vector<Particle> next = particles_;
  for (std::size_t i = 0; i < n; ++i) {
    next[i].velocity += accel_cache_[i] * half_dt;
    next[i].position += next[i].velocity * dt_;
  }

  std::vector<Vec3> accel(n);
  detail::pairwise_accelerations(next, gravity_, softening_, accel);

  for (std::size_t i = 0; i < n; ++i) {
    next[i].velocity += accel[i] * half_dt;
  }

  particles_ = std::move(next);
  accel_cache_ = std::move(accel);
  time_ += dt_;
  ++step_count_;
}

std::vector<Vec3> compute_accelerations(const Simulation& sim) {
  std::vector<Vec3> out(sim.size());
  detail::pairwise_accelerations(sim.particles(), sim.gravity(),
                                 sim.softening(), out);
  return out;
}

double total_energy(const Simulation& sim) {
  const auto ps = sim.particles();
  const double eps2 = sim.softening() * sim.softening();
  double kinetic = 0.0;
  double potential = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    kinetic += 0.5 * ps[i].mass * dot(ps[i].velocity, ps[i].velocity);
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const Vec3 d = ps[j].position - ps[i].position;
      const double r2 = dot(d, d) + eps2;
      if (r2 == 0.0) {
        throw SingularConfiguration("particles " + std::to_string(i) + " and " +
                                    std::to_string(j) +
                                    " coincide with zero softening");
      }
      potential -= sim.gravity() * ps[i].mass * ps[j].mass / std::sqrt(r2);
    }
  }
  return kinetic + potential;
}

Vec3 total_momentum(const Simulation& sim) {
  Vec3 p;
  for (const Particle& q : sim.particles()) p += q.velocity * q.mass;
  return p;
}

}  // namespace nbview
