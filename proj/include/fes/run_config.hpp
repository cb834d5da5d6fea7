#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fes/dataset.hpp"
#include "fes/toml_lite.hpp"
#include "fes/vumps.hpp"

namespace fes {

// One validated description of an entire run. TOML sections and keys map to
// CLI flags of the same name; fields not present fall back to the defaults
// below (the critical Ising desk-scale study).
struct RunConfig {
    // [model]
    std::string model = "ising";
    double J = 1.0;
    double h = 1.0;
    // [solve]
    std::vector<int> dims = {8, 12, 16, 20, 24, 28, 32};
    double tol = 1e-8;
    int max_iter = 2000;
    std::uint64_t seed = 1;
    // [observe]
    std::vector<std::string> ops = {"sigma",  "eps",     "mu",      "psi",
                                    "dsigma", "d2sigma", "d3sigma", "deps"};
    std::vector<std::string> entropy = {"half", "interval:0.1"};
    int spectrum_k = 10;
    int points_per_decade = 24;
    double x_max_factor = 40.0;
    std::string interpolant = "spline";
    bool sigma_connected = false;
    int interval_max_bond = 32;
    // [analyze]
    double s_lo = 0.05;
    double s_hi = 40.0;
    int s_points = 160;
    // [output]
    std::string out_dir = "runs/out";

    void validate() const;  // throws ConfigError

    VumpsOptions vumps_options() const;
    ObserveOptions observe_options() const;
    std::vector<double> interval_scales() const;  // parsed from entropy entries
    bool entropy_half() const;
    std::string canonical_toml() const;  // normalized snapshot for the manifest
};

RunConfig config_from_toml(const TomlTable& table);
RunConfig load_config(const std::string& path);

} // namespace fes
