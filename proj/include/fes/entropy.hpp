#pragma once

#include <vector>

#include "fes/uniform_mps.hpp"

namespace fes {

enum class CutKind { HalfLine, Interval };

struct EntropyRecord {
    int D = 0;
    CutKind kind = CutKind::HalfLine;
    long x = 0;                   // interval length in sites; 0 for the half-line
    double S = 0.0;               // von Neumann entropy in nats
    std::vector<double> schmidt;  // descending, squares sum to one
};

// Schmidt coefficients of the half-infinite bipartition: singular values of
// l^{1/2} r^{1/2}. In left-canonical gauge this reduces to the square roots of
// r's eigenvalues.
EntropyRecord half_line_entropy(const UniformMPS& state);

// Entropy of x consecutive sites via the D^2 x D^2 reshuffle of E^x: the
// window reduced density matrix has rank at most D^2 and its nonzero spectrum
// equals that of K^{1/2} G K^{1/2} with K = l^T (x) r and G the index-swapped
// transfer power. Cost O(D^6); D above max_bond is refused.
EntropyRecord interval_entropy(const UniformMPS& state, long x, int max_bond = 32);

std::string cut_kind_name(CutKind kind);

} // namespace fes
