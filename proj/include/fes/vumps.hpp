#pragma once

#include <cstdint>
#include <utility>

#include "fes/spin_chain.hpp"
#include "fes/uniform_mps.hpp"

namespace fes {

struct VumpsOptions {
    double tol = 1e-8;    // tangent-space gradient norm target
    int max_iter = 2000;
    std::uint64_t seed = 1;  // cold-start tensor and stall perturbation
};

struct SolveReport {
    int D = 0;
    double energy_density = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
};

// Tangent-space fixed-point iteration (VUMPS) for the ground state of a
// nearest-neighbour chain in the thermodynamic limit.  Returns a normalized
// mixed-canonical state; report.energy_density is evaluated on that exact
// state.  A supplied init must match the model's physical dimension and the
// requested bond dimension (InitDimensionMismatch otherwise).  If the
// gradient stalls (relative decrease below 1e-3 across 50 iterations) the
// iterate is perturbed with fresh noise once before giving up.
std::pair<UniformMPS, SolveReport> solve_ground_state(const SpinChainModel& model, int D,
                                                      const VumpsOptions& opts = {},
                                                      const UniformMPS* init = nullptr);

}  // namespace fes
