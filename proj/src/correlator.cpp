#include "fes/correlator.hpp"

#include <algorithm>
#include <cmath>

#include "fes/errors.hpp"
#include "fes/spin_chain.hpp"

namespace fes {

double CorrelatorSeries::log_abs_G(double xq) const {
    if (!has_interpolant) throw ScaleOutOfRange("series '" + label + "' has no interpolant");
    const double lx = std::log(xq);
    if (interpolant_kind == InterpolantKind::Spline) return spline.value(lx);
    return linear.value(lx);
}

double CorrelatorSeries::log_slope(double xq) const {
    if (!has_interpolant) throw ScaleOutOfRange("series '" + label + "' has no interpolant");
    const double lx = std::log(xq);
    if (interpolant_kind == InterpolantKind::Spline) return spline.derivative(lx);
    return linear.derivative(lx);
}

double CorrelatorSeries::x_lo() const {
    if (!has_interpolant) throw ScaleOutOfRange("series '" + label + "' has no interpolant");
    return std::exp(interpolant_kind == InterpolantKind::Spline ? spline.x_min() : linear.x_min());
}

double CorrelatorSeries::x_hi() const {
    if (!has_interpolant) throw ScaleOutOfRange("series '" + label + "' has no interpolant");
    return std::exp(interpolant_kind == InterpolantKind::Spline ? spline.x_max() : linear.x_max());
}

std::vector<long> correlation_grid(double mu2, int points_per_decade, double max_factor,
                                   long x_min) {
    if (mu2 <= 0.0 || points_per_decade < 1 || max_factor <= 0.0 || x_min < 1)
        throw ConfigError("correlation_grid: mu2, points per decade, max factor and x_min must be positive");
    const double x_max = std::max(static_cast<double>(x_min), max_factor * mu2);
    const double ratio = std::pow(10.0, 1.0 / points_per_decade);
    std::vector<long> xs;
    for (double t = static_cast<double>(x_min); t <= x_max * (1.0 + 1e-12); t *= ratio) {
        const long xi = std::lround(t);
        if (xs.empty() || xi > xs.back()) xs.push_back(xi);
    }
    const long last = std::lround(x_max);
    if (last > xs.back()) xs.push_back(last);
    return xs;
}

namespace {

void require_normalized(const UniformMPS& state, const char* where) {
    if (state.empty() || state.l.size() == 0 || state.r.size() == 0)
        throw NotNormalized(std::string(where) + ": state carries no fixed points; call normalized() first");
    const double pairing = std::abs(frob_inner(state.l, state.r) - cxd(1.0, 0.0));
    const double right = (apply_transfer_right(state.A, state.r) - state.r).norm();
    if (pairing > 1e-8 || right > 1e-8)
        throw NotNormalized(std::string(where) + ": fixed-point residuals " + std::to_string(pairing) +
                            ", " + std::to_string(right) + " exceed 1e-8");
}

struct Walker {
    const UniformMPS& state;
    Matrix v;
    double logscale = 0.0;
    bool dead = false;  // v collapsed to zero; every remaining value is zero

    void rescale() {
        const double m = v.norm();
        if (m == 0.0) {
            dead = true;
            return;
        }
        v /= m;
        logscale += std::log(m);
    }
};

} // namespace

CorrelatorSeries two_point_series(const UniformMPS& state, const OperatorInsertion& op,
                                  const std::vector<long>& xs, InterpolantKind interp) {
    require_normalized(state, "two_point");
    if (xs.empty()) throw ConfigError("two_point: empty separation grid");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] <= xs[i - 1]) throw ConfigError("two_point: separations must be strictly ascending");
    const int f = op.footprint;
    if (xs.front() < f)
        throw OverlapError("two_point: separation " + std::to_string(xs.front()) +
                           " smaller than the operator footprint " + std::to_string(f));

    CorrelatorSeries series;
    series.label = op.label;
    series.D = state.D;
    series.connected = op.connected;
    series.interpolant_kind = interp;

    const Matrix sz = pauli_z();
    Walker w{state};
    long cur = 0;
    double disconnected = 0.0;

    if (op.is_string()) {
        const Matrix right_end = op.kind == InsertionKind::StringZ ? identity2() : op.endpoint;
        w.v = apply_op_transfer_right(state.A, right_end, state.r);
        w.rescale();
        cur = 1;
    } else {
        series.one_point = frob_inner(state.l, apply_block_transfer_right(state.A, op.block, f, state.r));
        disconnected = std::norm(series.one_point);
        w.v = apply_block_transfer_right(state.A, op.block, f, state.r);
        w.v -= frob_inner(state.l, w.v) * state.r;
        w.rescale();
        cur = f;
    }

    const Matrix left_end = op.kind == InsertionKind::StringZ ? sz : op.endpoint;
    for (const long x : xs) {
        while (cur < x && !w.dead) {
            if (op.is_string()) {
                w.v = apply_op_transfer_right(state.A, sz, w.v);
            } else {
                w.v = apply_transfer_right(state.A, w.v);
                w.v -= frob_inner(state.l, w.v) * state.r;
            }
            w.rescale();
            ++cur;
        }
        cxd value = 0.0;
        if (!w.dead) {
            cxd closed;
            if (op.is_string())
                closed = frob_inner(state.l, apply_op_transfer_right(state.A, left_end, w.v));
            else
                closed = frob_inner(state.l,
                                    apply_block_transfer_right(state.A, op.block.adjoint(), f, w.v));
            value = closed * std::exp(w.logscale);
        }
        if (!op.is_string() && !op.connected) value += disconnected;
        series.x.push_back(static_cast<double>(x));
        series.G.push_back(value);
    }

    build_interpolant(series);
    return series;
}

void build_interpolant(CorrelatorSeries& series) {
    std::vector<double> lx, lg;
    for (std::size_t i = 0; i < series.x.size(); ++i) {
        const double a = std::abs(series.G[i]);
        if (a > 0.0) {
            lx.push_back(std::log(series.x[i]));
            lg.push_back(std::log(a));
        }
    }
    series.has_interpolant = false;
    if (lx.size() >= 3) {
        if (series.interpolant_kind == InterpolantKind::Spline)
            series.spline = CubicSpline(std::move(lx), std::move(lg));
        else
            series.linear = LinearInterp(std::move(lx), std::move(lg));
        series.has_interpolant = true;
    }
}

cxd two_point_value(const UniformMPS& state, const OperatorInsertion& op, long x) {
    return two_point_series(state, op, {x}, InterpolantKind::Linear).G.at(0);
}

} // namespace fes
