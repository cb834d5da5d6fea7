#include "fes/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fes {

namespace {

void check_knots(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("interpolant: need >= 2 knots with matching lengths");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument("interpolant: knots must be strictly increasing");
}

std::size_t find_segment(const std::vector<double>& xs, double x) {
    // Index i with xs[i] <= x <= xs[i+1], clamped to the boundary segments.
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    return std::min(i, xs.size() - 2);
}

} // namespace

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    check_knots(x_, y_);
    const std::size_t n = x_.size();
    m_.assign(n, 0.0);
    if (n == 2) return;  // natural spline through two points is a line

    // Thomas algorithm for the tridiagonal system on interior second
    // derivatives; natural boundary conditions m_0 = m_{n-1} = 0.
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    diag[0] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        const double lower = h0;
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

std::size_t CubicSpline::segment(double x) const { return find_segment(x_, x); }

double CubicSpline::value(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

LinearInterp::LinearInterp(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    check_knots(x_, y_);
}

std::size_t LinearInterp::segment(double x) const { return find_segment(x_, x); }

double LinearInterp::value(double x) const {
    const std::size_t i = segment(x);
    const double t = (x - x_[i]) / (x_[i + 1] - x_[i]);
    return (1.0 - t) * y_[i] + t * y_[i + 1];
}

double LinearInterp::derivative(double x) const {
    const std::size_t i = segment(x);
    const double left = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    // Centered estimate at interior knots when x sits between grid points is
    // just the segment slope; at the knot itself average the two segments.
    if (x == x_[i] && i > 0) {
        const double prev = (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
        return 0.5 * (left + prev);
    }
    return left;
}

} // namespace fes
