#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace fes {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// A site tensor A^s is stored as d matrices of shape D x D; A[s](i, j) has
// i = left bond, j = right bond. The doubled (transfer) space uses the
// flattening (i, k) -> i*D + k, with i the ket-layer and k the bra-layer
// index, so that a matrix rho on the bond space maps to vec(rho)[i*D+k] =
// rho(i, k) and right transfer application is rho -> sum_s A[s] rho A[s]^+.
using SiteTensor = std::vector<Matrix>;

inline Vector mat_to_vec(const Matrix& m) {
    const Eigen::Index D = m.rows();
    Vector v(D * m.cols());
    for (Eigen::Index i = 0; i < D; ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k) v(i * m.cols() + k) = m(i, k);
    return v;
}

inline Matrix vec_to_mat(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = v(i * cols + k);
    return m;
}

// Frobenius pairing <X, Y> = tr(X^+ Y), the inner product matching the
// doubled-space flattening above.
inline cxd frob_inner(const Matrix& x, const Matrix& y) {
    return (x.adjoint() * y).trace();
}

// Hermitian square root with clipping of small negative eigenvalues (roundoff
// from PSD matrices). The most negative eigenvalue found is reported through
// min_eig so callers can decide whether it violates positivity.
inline Matrix hermitian_sqrt(const Matrix& m, double* min_eig = nullptr) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
    RVector ev = es.eigenvalues();
    if (min_eig) *min_eig = ev.minCoeff();
    RVector root = ev.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

// Square root and inverse square root of a Hermitian positive definite matrix
// in one eigendecomposition; eigenvalues below floor_rel * lambda_max are
// floored before inversion to keep gauge transforms bounded.
inline void hermitian_sqrt_pair(const Matrix& m, Matrix& sqrt_out, Matrix& inv_sqrt_out,
                                double floor_rel = 1e-14) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
    RVector ev = es.eigenvalues();
    const double floor_val = floor_rel * std::max(ev.maxCoeff(), 0.0);
    RVector root(ev.size()), inv_root(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double e = std::max(ev(i), floor_val);
        root(i) = std::sqrt(e);
        inv_root(i) = 1.0 / root(i);
    }
    const Matrix& U = es.eigenvectors();
    sqrt_out = U * root.asDiagonal() * U.adjoint();
    inv_sqrt_out = U * inv_root.asDiagonal() * U.adjoint();
}

} // namespace fes
