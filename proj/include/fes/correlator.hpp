#pragma once

#include <string>
#include <vector>

#include "fes/insertions.hpp"
#include "fes/spline.hpp"
#include "fes/uniform_mps.hpp"

namespace fes {

enum class InterpolantKind { Spline, Linear };

// Two-point function of one operator sampled on an ascending integer grid.
// G holds the reported values: the connected part when connected is set,
// otherwise the full correlator. one_point = (l|O|r); its squared modulus is
// the disconnected part (recorded even when not subtracted). The interpolant
// lives on (log x, log |G|); points with G = 0 are excluded from it.
struct CorrelatorSeries {
    std::string label;
    int D = 0;
    std::vector<double> x;
    std::vector<cxd> G;
    bool connected = false;
    cxd one_point = 0.0;
    InterpolantKind interpolant_kind = InterpolantKind::Spline;
    bool has_interpolant = false;

    double log_abs_G(double xq) const;  // interpolated log |G| at real separation xq
    double log_slope(double xq) const;  // d log|G| / d log x at xq
    double x_lo() const;                // interpolant domain in real separations
    double x_hi() const;
    bool covers(double xq) const { return has_interpolant && xq >= x_lo() && xq <= x_hi(); }

    CubicSpline spline;    // only the selected interpolant is constructed
    LinearInterp linear;
};

// Log-spaced integer separations from x_min to max_factor * mu2, the stated
// number of points per decade, rounded and deduplicated.
std::vector<long> correlation_grid(double mu2, int points_per_decade = 24,
                                   double max_factor = 40.0, long x_min = 1);

// G(x) = (l| O_left^+ E^{x-f} O_right |r) evaluated by repeated matrix-free
// transfer application. String kinds replace the bulk E by the sigma-z dressed
// transfer operator and close with the endpoint factor verbatim on both sides.
cxd two_point_value(const UniformMPS& state, const OperatorInsertion& op, long x);

// Walks the grid once, closing the contraction at every requested separation;
// cost is O(x_max D^3 d) total rather than per point.
CorrelatorSeries two_point_series(const UniformMPS& state, const OperatorInsertion& op,
                                  const std::vector<long>& xs,
                                  InterpolantKind interp = InterpolantKind::Spline);

// (Re)builds the log-log interpolant from the stored samples; used after
// loading a series from disk.
void build_interpolant(CorrelatorSeries& series);

} // namespace fes
