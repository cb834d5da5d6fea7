#pragma once

#include <span>
#include <string>

namespace fes {

// Ordinary least squares y = intercept + slope * x with two-sided Student-t
// confidence half-widths for the slope at 95% and 99.73%. The 99.73% level is
// the two-sided 3-sigma convention, quantile at 1 - 0.0027/2.
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double ci95 = 0.0;    // half-width of the 95% slope interval
    double ci9973 = 0.0;  // half-width of the 99.73% slope interval
    int n_points = 0;
    double s = -1.0;      // scale this fit belongs to; -1 when not applicable,
                          // +infinity for the dominant-coefficient fit
    double r2 = 0.0;
    double max_abs_resid = 0.0;
};

// Throws InsufficientPoints for n < 3 (slope CIs need n - 2 > 0).
FitResult ols_fit(std::span<const double> x, std::span<const double> y);

// Two-sided Student-t quantile helper, exposed for the CI-ratio property.
double student_t_two_sided(double confidence, int dof);

} // namespace fes
