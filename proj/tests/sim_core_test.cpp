#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "naive_gravity.hpp"
#include "nbview/errors.hpp"
#include "nbview/simulation.hpp"
#include "random_state.hpp"

namespace nbview {
namespace {

using testing::random_simulation;
using testing::sum_m_abs_v;

Simulation unit_pair(double softening = 0.0) {
  Simulation sim = Simulation::create(0.01, 1.0, softening);
  sim.add({.mass = 1.0, .radius = 0.0, .position = {-0.5, 0.0, 0.0}, .velocity = {}});
  sim.add({.mass = 1.0, .radius = 0.0, .position = {0.5, 0.0, 0.0}, .velocity = {}});
  return sim;
}

// Equal unit masses on a circular orbit of separation 1 about their
// barycentre; omega^2 = G (m1 + m2) / a^3 = 2.
Simulation circular_binary(double dt) {
  const double v = std::sqrt(2.0) / 2.0;
  Simulation sim = Simulation::create(dt, 1.0, 0.0);
  sim.add({.mass = 1.0, .radius = 0.0, .position = {0.5, 0.0, 0.0}, .velocity = {0.0, v, 0.0}});
  sim.add({.mass = 1.0, .radius = 0.0, .position = {-0.5, 0.0, 0.0}, .velocity = {0.0, -v, 0.0}});
  return sim;
}

const double kBinaryPeriod = 2.0 * std::numbers::pi / std::sqrt(2.0);

double relative_error(const Vec3& got, const Vec3& want) {
  return norm(got - want) / norm(want);
}

TEST(NewSimulation, EmptyConstruction) {
  const Simulation sim = Simulation::create(0.01, 1.0, 0.0);
  EXPECT_EQ(sim.size(), 0u);
  EXPECT_EQ(sim.time(), 0.0);
  EXPECT_EQ(sim.step_count(), 0u);
  EXPECT_FALSE(sim.paused());
}

TEST(NewSimulation, RejectsBadParameters) {
  EXPECT_THROW(Simulation::create(-1.0, 1.0, 0.0), ParameterError);
  EXPECT_THROW(Simulation::create(0.0, 1.0, 0.0), ParameterError);
  EXPECT_THROW(Simulation::create(NAN, 1.0, 0.0), ParameterError);
  EXPECT_THROW(Simulation::create(0.01, 0.0, 0.0), ParameterError);
  EXPECT_THROW(Simulation::create(0.01, INFINITY, 0.0), ParameterError);
  EXPECT_THROW(Simulation::create(0.01, 1.0, -0.1), ParameterError);
}

TEST(NewSimulation, DiskDemoConfigIsValid) {
  const Simulation sim = Simulation::create(0.0062831853, 1.0, 0.02);
  EXPECT_DOUBLE_EQ(sim.dt(), 0.0062831853);
  EXPECT_EQ(sim.softening(), 0.02);
}

TEST(NewSimulation, RejectsInvalidParticles) {
  Simulation sim = Simulation::create(0.01, 1.0, 0.0);
  EXPECT_THROW(sim.add({.mass = -1.0, .radius = 0.0, .position = {}, .velocity = {}}), ParameterError);
  EXPECT_THROW(sim.add({.mass = 1.0, .radius = -1.0, .position = {}, .velocity = {}}), ParameterError);
  EXPECT_THROW(sim.add({.mass = 1.0, .radius = 0.0, .position = {NAN, 0, 0}, .velocity = {}}),
               ParameterError);
  EXPECT_THROW(sim.add({.mass = 1.0, .radius = 0.0, .position = {}, .velocity = {0, INFINITY, 0}}),
               ParameterError);
  EXPECT_EQ(sim.size(), 0u);
}

TEST(Accelerations, SingleParticleFeelsNothing) {
  Simulation sim = Simulation::create(0.01, 1.0, 0.0);
  sim.add({.mass = 3.0, .radius = 0.0, .position = {1, 2, 3}, .velocity = {4, 5, 6}});
  const auto a = compute_accelerations(sim);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0], (Vec3{0, 0, 0}));
}

TEST(Accelerations, UnitPairByHand) {
  const auto a = compute_accelerations(unit_pair());
  EXPECT_EQ(a[0], (Vec3{1.0, 0.0, 0.0}));
  EXPECT_EQ(a[1], (Vec3{-1.0, 0.0, 0.0}));
}

TEST(Accelerations, CoincidentParticlesWithoutSofteningAreSingular) {
  Simulation sim = Simulation::create(0.01, 1.0, 0.0);
  sim.add({.mass = 1.0, .radius = 0.0, .position = {1, 1, 1}, .velocity = {}});
  sim.add({.mass = 1.0, .radius = 0.0, .position = {1, 1, 1}, .velocity = {}});
  EXPECT_THROW(compute_accelerations(sim), SingularConfiguration);
  EXPECT_THROW(total_energy(sim), SingularConfiguration);

  const std::uint64_t before = sim.step_count();
  const Particle p0 = sim.particles()[0];
  EXPECT_THROW(sim.step(), SingularConfiguration);
  EXPECT_EQ(sim.step_count(), before);
  EXPECT_EQ(sim.time(), 0.0);
  EXPECT_EQ(sim.particles()[0], p0);
}

TEST(Accelerations, CoincidentParticlesWithSofteningAreFine) {
  Simulation sim = Simulation::create(0.01, 1.0, 0.1);
  sim.add({.mass = 1.0, .radius = 0.0, .position = {1, 1, 1}, .velocity = {}});
  sim.add({.mass = 1.0, .radius = 0.0, .position = {1, 1, 1}, .velocity = {}});
  const auto a = compute_accelerations(sim);
  EXPECT_EQ(a[0], (Vec3{0, 0, 0}));
}

// Both the short exact path and the vectorised path (N >= 64) are checked
// against the double-loop oracle.
TEST(Accelerations, MatchNaiveOracleOnRandomStates) {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> count(1, 32);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = trial < 95 ? count(rng) : 64 + 37 * static_cast<std::size_t>(trial - 95);
    const Simulation sim = random_simulation(rng, n, 0.01, trial % 2 ? 0.05 : 0.0);
    const auto got = compute_accelerations(sim);
    const auto want = oracle::accelerations(sim.particles(), sim.gravity(), sim.softening());
    for (std::size_t i = 0; i < n; ++i) {
      if (n == 1) {
        EXPECT_EQ(got[i], (Vec3{}));
        continue;
      }
      EXPECT_LE(relative_error(got[i], want[i]), 1e-13) << "trial " << trial << " i=" << i;
    }
  }
}

TEST(Energy, EmptyIsZero) {
  EXPECT_EQ(total_energy(Simulation::create(0.01, 1.0, 0.0)), 0.0);
}

TEST(Energy, UnitPairAtRest) { EXPECT_EQ(total_energy(unit_pair()), -1.0); }

TEST(Energy, MatchesNaiveOracleOnRandomStates) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> count(1, 32);
  for (int trial = 0; trial < 100; ++trial) {
    const Simulation sim = random_simulation(rng, count(rng));
    const double want = oracle::energy(sim.particles(), sim.gravity(), sim.softening());
    EXPECT_LE(std::abs(total_energy(sim) - want), 1e-13 * std::abs(want)) << "trial " << trial;
  }
}

TEST(Momentum, Basics) {
  Simulation sim = Simulation::create(0.01, 1.0, 0.0);
  EXPECT_EQ(total_momentum(sim), (Vec3{}));
  sim.add({.mass = 2.0, .radius = 0.0, .position = {}, .velocity = {1, 2, 3}});
  EXPECT_EQ(total_momentum(sim), (Vec3{2, 4, 6}));
}

TEST(Step, ForceFreeDrift) {
  Simulation sim = Simulation::create(0.5, 1.0, 0.0);
  sim.add({.mass = 1.0, .radius = 0.0, .position = {0, 0, 0}, .velocity = {1, 0, 0}});
  sim.step();
  EXPECT_EQ(sim.particles()[0].position, (Vec3{0.5, 0, 0}));
  EXPECT_EQ(sim.particles()[0].velocity, (Vec3{1, 0, 0}));
  EXPECT_EQ(sim.time(), 0.5);
  EXPECT_EQ(sim.step_count(), 1u);
}

TEST(Step, CircularBinaryReturnsAfterOnePeriod) {
  Simulation sim = circular_binary(kBinaryPeriod / 1000.0);
  const auto start = std::vector<Particle>(sim.particles().begin(), sim.particles().end());
  for (int k = 0; k < 1000; ++k) sim.step();
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LT(norm(sim.particles()[i].position - start[i].position), 1e-3);
  }
}

TEST(Step, EnergyBoundedOverHundredOrbits) {
  Simulation sim = circular_binary(kBinaryPeriod / 1000.0);
  const double e0 = total_energy(sim);
  double worst = 0.0;
  for (int k = 0; k < 100 * 1000; ++k) {
    sim.step();
    worst = std::max(worst, std::abs((total_energy(sim) - e0) / e0));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(Step, TimeIsTheFloatingSumOfSteps) {
  Simulation sim = circular_binary(0.1);
  double t = 0.0;
  for (int k = 0; k < 250; ++k) {
    sim.step();
    t += 0.1;
    ASSERT_EQ(sim.time(), t);
  }
  EXPECT_EQ(sim.step_count(), 250u);
}

TEST(Step, TimeReversible) {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 15;
    Simulation sim = random_simulation(rng, n, 0.01, 0.05);
    const std::vector<Particle> start(sim.particles().begin(), sim.particles().end());
    double scale = 0.0;
    for (const Particle& p : start) scale = std::max(scale, norm(p.position));

    for (int k = 0; k < 100; ++k) sim.step();
    sim.set_dt(-sim.dt());
    for (int k = 0; k < 100; ++k) sim.step();

    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_LE(norm(sim.particles()[i].position - start[i].position), 1e-6 * scale)
          << "trial " << trial << " i=" << i;
    }
  }
}

TEST(Step, MomentumConservedOnRandomStates) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    Simulation sim = random_simulation(rng, 2 + static_cast<std::size_t>(trial), 0.001, 0.05);
    const Vec3 p0 = total_momentum(sim);
    const double scale = sum_m_abs_v(sim);
    for (int k = 0; k < 1000; ++k) sim.step();
    EXPECT_LE(norm(total_momentum(sim) - p0), 1e-12 * scale) << "trial " << trial;
  }
}

TEST(Step, SetDtRejectsZero) {
  Simulation sim = Simulation::create(0.1, 1.0, 0.0);
  EXPECT_THROW(sim.set_dt(0.0), ParameterError);
  EXPECT_THROW(sim.set_dt(NAN), ParameterError);
  sim.set_dt(-0.1);
  EXPECT_EQ(sim.dt(), -0.1);
}

}  // namespace
}  // namespace nbview
