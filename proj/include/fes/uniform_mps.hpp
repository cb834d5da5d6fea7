#pragma once

#include <cstdint>
#include <string>

#include "fes/linalg.hpp"

namespace fes {

enum class Gauge { Raw, LeftCanonical, RightCanonical, MixedCanonical };

std::string gauge_name(Gauge g);

// Translation-invariant MPS in the thermodynamic limit: one site tensor A of
// shape (D, d, D) stored as d bond matrices, plus the dominant left/right
// fixed points l, r of the transfer operator E(rho) = sum_s A^s rho A^s+.
// Normalization convention: dominant eigenvalue of E is 1 and tr(l r) = 1,
// with l, r Hermitian positive semi-definite.
struct UniformMPS {
    SiteTensor A;  // d matrices, each D x D
    int D = 0;
    int d = 0;
    Gauge gauge = Gauge::Raw;
    Matrix l, r;

    bool empty() const { return A.empty(); }
};

// Right and left application of the transfer operator of tensor A.
Matrix apply_transfer_right(const SiteTensor& A, const Matrix& rho);
Matrix apply_transfer_left(const SiteTensor& A, const Matrix& sigma);

// Single-site operator insertion, op is d x d with op(s, t) = <s|op|t>:
// right action rho -> sum_{s,t} op(s,t) A^t rho A^s+ and its adjoint.
Matrix apply_op_transfer_right(const SiteTensor& A, const Matrix& op, const Matrix& rho);
Matrix apply_op_transfer_left(const SiteTensor& A, const Matrix& op, const Matrix& sigma);

// f-site block operator B (d^f x d^f, site 1 on the most significant digit).
Matrix apply_block_transfer_right(const SiteTensor& A, const Matrix& B, int footprint,
                                  const Matrix& rho);
Matrix apply_block_transfer_left(const SiteTensor& A, const Matrix& B, int footprint,
                                 const Matrix& sigma);

// Dense D^2 x D^2 materialization of E in the (i, k) -> i*D + k flattening.
// Intended for oracles and the interval entropy; cost O(D^5 d).
Matrix dense_transfer_matrix(const SiteTensor& A);

// Random tensor with complex Gaussian entries of scale 1/sqrt(D).
UniformMPS random_umps(int D, int d, std::uint64_t seed);

// Rescales A so the dominant transfer eigenvalue is exactly 1 and stores
// fresh Hermitian fixed points with tr(l r) = 1. Throws
// DegenerateDominantEigenvalue when the two largest eigenvalue moduli of E
// differ by less than 1e-12 (non-injective or cat state).
UniformMPS normalized(const UniformMPS& state);

// Gauge transform to the requested canonical form; the physical state is
// unchanged. Mixed-canonical output has left-orthonormal A with r diagonal
// (descending Schmidt weights) and l = identity.
UniformMPS canonicalize(const UniformMPS& state, Gauge mode);

// Largest residuals of the stored normalization data; used by validation.
struct FixedPointResiduals {
    double left = 0.0;        // ||E^T(l) - l||_F
    double right = 0.0;       // ||E(r) - r||_F
    double pairing = 0.0;     // |tr(l r) - 1|
    double eigenvalue = 0.0;  // |e_1 - 1|
};
FixedPointResiduals fixed_point_residuals(const UniformMPS& state);

// <O> for a single-site operator, tr(l E_O(r)); gauge independent.
cxd onsite_expectation_value(const UniformMPS& state, const Matrix& op);

} // namespace fes
