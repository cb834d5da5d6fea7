#pragma once

#include <vector>

#include "fes/uniform_mps.hpp"

namespace fes {

// Leading spectrum of T = log(E). Eigenvalues are sorted by descending real
// part (ties broken by descending imaginary part), so lambda_1 ~ 0 is the
// normalization mode. left_vectors / right_vectors are biorthonormal in the
// adjoint pairing, left[I].dot(right[J]) = delta_IJ, with the dominant pair
// carrying the state's own (l, r) normalization and every other right vector
// scaled to unit norm with its largest-modulus entry real positive.
// lengths[I] = -1/Re(lambda_I) in lattice sites; entry 0 is +infinity.
struct TransferSpectrum {
    std::vector<cxd> eigenvalues;
    std::vector<Vector> left_vectors;
    std::vector<Vector> right_vectors;
    std::vector<double> lengths;
    int D = 0;

    int count() const { return static_cast<int>(eigenvalues.size()); }
};

// Iterative (Arnoldi) route; K <= D^2 enforced with KTooLarge.
TransferSpectrum transfer_spectrum(const UniformMPS& state, int K);

// Dense-materialization route for oracles and full-spectrum checks (D <= 16
// is the intended regime; memory is the only limit).
TransferSpectrum dense_transfer_spectrum(const UniformMPS& state, int K);

// mu_2, the induced correlation length of the truncated state.
double correlation_length(const TransferSpectrum& spectrum);

} // namespace fes
