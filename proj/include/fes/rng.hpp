#pragma once

#include <random>

#include "fes/linalg.hpp"

namespace fes {

// All stochastic choices in the library flow through this wrapper so that a
// recorded seed reproduces a run bit-for-bit on one platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double gaussian(double stddev = 1.0) {
        return std::normal_distribution<double>(0.0, stddev)(engine_);
    }

    cxd gaussian_complex(double stddev = 1.0) {
        // Independent real and imaginary parts, each with stddev/sqrt(2), so
        // the complex entry has the requested standard deviation.
        const double s = stddev / std::sqrt(2.0);
        const double re = gaussian(s);
        const double im = gaussian(s);
        return {re, im};
    }

    Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double stddev = 1.0) {
        Matrix m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gaussian_complex(stddev);
        return m;
    }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

} // namespace fes
