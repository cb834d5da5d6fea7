#pragma once

#include <functional>
#include <vector>

namespace fes {

// Gauss-Legendre nodes and weights on [a, b]. Nodes are computed by Newton
// iteration on the Legendre polynomial; accurate to machine precision for the
// orders used here (n <= 512).
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    GaussLegendre(int n, double a, double b);

    double integrate(const std::function<double(double)>& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

} // namespace fes
