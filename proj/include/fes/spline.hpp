#pragma once

#include <vector>

namespace fes {

// Natural cubic spline through (x_i, y_i) with strictly increasing x.
// Provides the value and the first derivative; both are what the scaling
// analysis needs (log-log correlator interpolation and its local slope).
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double value(double x) const;
    double derivative(double x) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    bool contains(double x) const { return x >= x_min() && x <= x_max(); }

  private:
    std::size_t segment(double x) const;
    std::vector<double> x_, y_, m_;  // m_: second derivatives at the knots
};

// Piecewise-linear interpolant on the same interface; the derivative of the
// interior point x uses the centered difference of the two adjacent segments.
class LinearInterp {
  public:
    LinearInterp() = default;
    LinearInterp(std::vector<double> x, std::vector<double> y);

    double value(double x) const;
    double derivative(double x) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    bool contains(double x) const { return x >= x_min() && x <= x_max(); }

  private:
    std::size_t segment(double x) const;
    std::vector<double> x_, y_;
};

} // namespace fes
