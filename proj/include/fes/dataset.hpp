#pragma once

#include <map>
#include <string>
#include <vector>

#include "fes/correlator.hpp"
#include "fes/entropy.hpp"
#include "fes/spectrum.hpp"

namespace fes {

// Everything the scaling analysis consumes for one operator at one D. For
// local operators couplings[I-1] = (l|O+|r_I)(l_I|O|r), the coefficient of the
// I-th term of the spectral expansion of G; for strings the analogous
// coefficient through the dominant eigenpair of the sigma-z dressed transfer
// operator, together with that eigenvalue.
struct OperatorRecord {
    CorrelatorSeries series;
    std::vector<cxd> couplings;
    cxd string_coupling = 0.0;
    cxd string_eigenvalue = 0.0;
    bool is_string = false;
};

struct SpectrumSummary {
    std::vector<cxd> eigenvalues;  // lambda_I = log e_I, descending real part
    std::vector<double> lengths;   // mu_I = -1 / Re lambda_I; entry 0 is +inf
};

struct DRecord {
    int D = 0;
    double mu2 = 0.0;
    SpectrumSummary spectrum;
    std::map<std::string, OperatorRecord> ops;
    EntropyRecord half_line;
    std::vector<EntropyRecord> intervals;
    bool has_half_line = false;
};

struct ScalingDataset {
    std::string model = "ising";
    double J = 1.0;
    double h = 1.0;
    double interval_s = 0.1;
    std::vector<DRecord> records;  // ascending D
};

struct ObserveOptions {
    std::vector<std::string> ops = {"sigma", "eps",    "mu",     "psi",
                                    "dsigma", "d2sigma", "d3sigma", "deps"};
    int spectrum_K = 10;
    int points_per_decade = 24;
    double x_max_factor = 40.0;
    bool half_line = true;
    std::vector<double> interval_scales = {0.1};
    int interval_max_bond = 32;
    InterpolantKind interp = InterpolantKind::Spline;
    bool sigma_connected = false;
};

// Full observable extraction for one converged state: transfer spectrum,
// correlator series with dominant couplings, and entropies.
DRecord observe_state(const UniformMPS& state, const ObserveOptions& opts);

// JSON round trip for cached per-D observable files. Interpolants are rebuilt
// on load; write is atomic (temp file + rename).
std::string drecord_to_json(const DRecord& rec);
DRecord drecord_from_json(const std::string& text, InterpolantKind interp);
void save_drecord(const DRecord& rec, const std::string& path);
DRecord load_drecord(const std::string& path, InterpolantKind interp = InterpolantKind::Spline);

} // namespace fes
