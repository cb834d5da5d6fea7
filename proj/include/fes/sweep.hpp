#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fes/vumps.hpp"

namespace fes {

struct SweepEntry {
    int D = 0;
    UniformMPS state;  // empty when failed
    SolveReport report;
    bool failed = false;
    std::string error;
};

// Embed a state into a larger bond space; new rows/columns are filled with
// complex Gaussian noise of the given amplitude so the optimizer can leave
// the embedded subspace.
UniformMPS expand_bond_dimension(const UniformMPS& state, int D_new, double noise_amplitude,
                                 std::uint64_t seed);

// Solve for each D in ascending order; every solve after the first is
// warm-started from the previous converged state expanded to the larger D
// (noise amplitude 1e-3).  A failing D is marked and the sweep continues,
// falling back to a cold start for the next D.  on_result fires once per D
// so callers can persist results as they arrive.
std::vector<SweepEntry> sweep_bond_dimensions(
    const SpinChainModel& model, const std::vector<int>& dims, const VumpsOptions& base,
    const std::function<void(const SweepEntry&)>& on_result = {});

struct OrderPoint {
    double h = 0.0;
    double sigma_x = 0.0;
    SolveReport report;
};

struct OrderSweepResult {
    int D = 0;
    double zero_tol = 1e-3;
    std::vector<OrderPoint> points;
    double h_star = 0.0;  // midpoint of last |m| > tol and first |m| <= tol
    bool transition_found = false;
};

// Scan the transverse field upward at fixed D on the symmetry-broken branch:
// the first point starts from a sigma-x polarized product state plus noise,
// later points warm-start from the previous field value.
OrderSweepResult order_parameter_sweep(double J, const std::vector<double>& h_grid, int D,
                                       const VumpsOptions& base, double zero_tol = 1e-3);

}  // namespace fes
