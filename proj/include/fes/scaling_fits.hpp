#pragma once

#include <string>
#include <vector>

#include "fes/dataset.hpp"
#include "fes/stats.hpp"

namespace fes {

struct ScanPoint {
    double s = 0.0;
    bool skipped = false;
    std::string skip_reason;
    FitResult fit;  // log|G(s mu2)| against log(s mu2) across the sweep
};

enum class ExponentMethod { Scan, S0Fallback1, InfiniteScale };

struct ExponentEstimate {
    std::string label;
    double s_star = 0.0;  // +infinity when the dominant-coefficient fit wins
    double two_delta = 0.0;
    double ci95 = 0.0;
    double ci9973 = 0.0;
    double s0 = 1.0;
    bool s0_from_intersection = false;
    ExponentMethod method = ExponentMethod::Scan;
    FitResult fit;                // the winning fit
    std::vector<ScanPoint> scan;  // full curve, for the report and CSVs
};

std::string exponent_method_name(ExponentMethod method);

// 160 log-spaced scales on [0.05, 40] unless told otherwise.
std::vector<double> scale_grid(double lo = 0.05, double hi = 40.0, int n = 160);

// One OLS fit per scale; scales where s*mu2(D) leaves any D's sampled window
// are skipped and flagged rather than fitted on a subset.
std::vector<ScanPoint> fes_exponent_curve(const ScalingDataset& data, const std::string& label,
                                          const std::vector<double>& s_grid);

// Local log-log slope of a single-D series at x = s mu2 (the one-D estimate).
double direct_slope(const CorrelatorSeries& series, double mu2, double s);

struct S0Result {
    double s0 = 1.0;
    bool from_intersection = false;
};

// Largest s < 1 at which the single-D slope at the biggest D lies inside the
// 99.73% band of the cross-D fit; falls back to s0 = 1 when they never meet.
S0Result find_s0(const std::vector<ScanPoint>& scan, const CorrelatorSeries& largest_series,
                 double largest_mu2);

// OLS of the log dominant spectral coefficient against log mu2(D). Uses the
// disconnected term when the series is unconnected and it is nonzero,
// otherwise the lowest coupled transfer mode; strings use the dressed-transfer
// coupling. Throws NoCoupling when nothing couples above 1e-12.
FitResult infinite_scale_fit(const ScalingDataset& data, const std::string& label);

// The full recipe: scan, s0, then the minimal-ci95 candidate among scales
// >= s0 plus the s = infinity fit.
ExponentEstimate estimate_exponent(const ScalingDataset& data, const std::string& label,
                                   const std::vector<double>& s_grid = scale_grid());

} // namespace fes
