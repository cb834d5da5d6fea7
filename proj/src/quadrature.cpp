#include "fes/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fes {

GaussLegendre::GaussLegendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("GaussLegendre: order must be positive");
    nodes.resize(n);
    weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess for the i-th root of P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Evaluate P_n(x) and P_{n-1}(x) by the three-term recurrence.
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        // Map from [-1, 1] to [a, b]; roots come in symmetric pairs.
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        nodes[i] = mid - half * x;
        nodes[n - 1 - i] = mid + half * x;
        weights[i] = weights[n - 1 - i] = half * w;
    }
}

} // namespace fes
