#pragma once

#include <map>
#include <string>

#include "fes/linalg.hpp"

namespace fes {

// Pauli matrices in the sigma-z eigenbasis, |0> = |up>, |1> = |down>.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix identity2();

// Kronecker product; the first factor owns the most significant index,
// (a kron b)((i*db + j), (k*db + l)) = a(i, k) * b(j, l).
Matrix kron(const Matrix& a, const Matrix& b);

// Nearest-neighbour spin chain defined by a two-site Hamiltonian density
// h2 acting on C^d (x) C^d.  Row/column index pairs follow the kron
// convention above.
struct SpinChainModel {
    std::string name;
    int d = 0;
    Matrix h2;
    std::map<std::string, double> params;
};

// Transverse-field Ising chain,
//   h2 = -J sx(x)sx + (h/2)(sz(x)1 + 1(x)sz),
// which sums to H = -J sum sx sx + h sum sz with each field term shared
// between the two bonds that touch the site.  Throws
// NonHermitianHamiltonian if the assembled density drifts from Hermitian
// by more than 1e-14.
SpinChainModel ising_model(double J, double h);

// Registry lookup used by the CLI ("ising" is the only entry).
SpinChainModel make_model(const std::string& name, const std::map<std::string, double>& params);

}  // namespace fes
