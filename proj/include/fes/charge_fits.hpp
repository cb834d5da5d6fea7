#pragma once

#include <string>
#include <vector>

#include "fes/dataset.hpp"
#include "fes/stats.hpp"

namespace fes {

struct CentralChargeFit {
    std::string source;  // "half_line" or "interval"
    double c = 0.0;
    double ci95 = 0.0;
    double ci9973 = 0.0;
    FitResult fit;  // S against log mu2
};

// S_half = (c/6) log mu2 + k across the sweep.
CentralChargeFit fit_central_charge_half_line(const ScalingDataset& data);

// Interval at x = interval_s * mu2(D): S = (c/3) log mu2 + k.
CentralChargeFit fit_central_charge_interval(const ScalingDataset& data);

// kappa(c) = 6 / (c (sqrt(12/c) + 1)), the predicted growth exponent of mu2
// with D, and its numeric inverse (bisection on c in [0.05, 10]).
double kappa_of_c(double c);
double invert_kappa(double kappa);

struct KappaFit {
    FitResult mu2_fit;  // log mu2 against log D
    double kappa = 0.0;
    double kappa_ci95 = 0.0;
    double c_from_kappa = 0.0;
    double c_from_kappa_ci95 = 0.0;   // first order through dkappa/dc
    FitResult entropy_fit;            // S_half against log D
    double c_free = 0.0;              // 6 * entropy slope / fitted kappa
    double c_free_ci95 = 0.0;
};

KappaFit fit_kappa(const ScalingDataset& data);

struct RatioRow {
    int I = 0;                   // 1-based eigenvalue index, I >= 2
    std::vector<double> ratios;  // Re lambda_I / Re lambda_2 per D
    double drift = 0.0;          // relative change between the two largest D
    bool converged = false;      // drift < 2%
    FitResult mu_fit;            // log mu_I against log D
    bool has_mu_fit = false;
};

struct RatioDiagnostic {
    std::vector<int> dims;
    std::vector<RatioRow> rows;
};

RatioDiagnostic eigenvalue_ratio_diagnostic(const ScalingDataset& data, int K);

} // namespace fes
