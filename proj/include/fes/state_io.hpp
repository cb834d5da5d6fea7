#pragma once

#include <string>

#include "fes/spin_chain.hpp"
#include "fes/vumps.hpp"

namespace fes {

struct LoadedState {
    UniformMPS state;  // fixed points recomputed on load
    SolveReport report;
    std::string model_name = "ising";
    double J = 1.0;
    double h = 1.0;
};

// State files carry the tensor entries as A[i][s][j] = [re, im] with i the
// left bond, s the physical index and j the right bond, plus the model
// parameters and the solve report. Fixed points are not stored; the loader
// rebuilds them so a corrupted tensor cannot smuggle in stale l, r.
std::string state_to_json(const UniformMPS& state, const SpinChainModel& model,
                          const SolveReport& report);
// With normalize = false the returned tensor is kept exactly as stored (gauge
// Raw, no fixed points); validation uses this to test the stored normalization.
LoadedState state_from_json(const std::string& text, bool normalize = true);

// Atomic write (temp file + rename).
void save_state(const std::string& path, const UniformMPS& state, const SpinChainModel& model,
                const SolveReport& report);
LoadedState load_state(const std::string& path);

} // namespace fes
