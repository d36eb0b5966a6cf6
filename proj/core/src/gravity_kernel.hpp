#pragma once

#include <span>

#include "nbview/simulation.hpp"

namespace nbview::detail {

// Pairwise accumulation into out (resized by the caller to particles.size()).
// Throws SingularConfiguration without touching out.
void pairwise_accelerations(std::span<const Particle> particles, double gravity,
                            double softening, std::span<Vec3> out);

}  // namespace nbview::detail
