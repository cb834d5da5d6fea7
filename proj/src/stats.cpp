#include "fes/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "fes/errors.hpp"

namespace fes {

double student_t_two_sided(double confidence, int dof) {
    boost::math::students_t_distribution<double> dist(dof);
    return boost::math::quantile(dist, 1.0 - (1.0 - confidence) / 2.0);
}

FitResult ols_fit(std::span<const double> x, std::span<const double> y) {
    const int n = static_cast<int>(x.size());
    if (n != static_cast<int>(y.size()))
        throw InsufficientPoints("ols_fit: x and y lengths differ");
    if (n < 3) throw InsufficientPoints("ols_fit: need at least 3 points, got " + std::to_string(n));

    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw InsufficientPoints("ols_fit: regressor has zero variance");

    FitResult fit;
    fit.n_points = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double ssr = 0.0, max_resid = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += r * r;
        max_resid = std::max(max_resid, std::abs(r));
    }
    // Guard against tiny negative roundoff in perfectly collinear data.
    ssr = std::max(ssr, 0.0);
    fit.max_abs_resid = max_resid;
    fit.r2 = (syy > 0.0) ? 1.0 - ssr / syy : 1.0;

    const int dof = n - 2;
    const double se_slope = std::sqrt((ssr / dof) / sxx);
    fit.ci95 = student_t_two_sided(0.95, dof) * se_slope;
    fit.ci9973 = student_t_two_sided(0.9973, dof) * se_slope;
    return fit;
}

} // namespace fes
