#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "fes/linalg.hpp"

namespace fes {

using MatVec = std::function<Vector(const Vector&)>;

struct EigPair {
    cxd value;
    Vector vector;  // unit 2-norm
};

struct ArnoldiOptions {
    int k = 4;               // wanted eigenpairs, largest modulus
    int max_subspace = 0;    // 0: chosen from k and the problem size
    int max_restarts = 200;
    double tol = 1e-12;      // residual ||A v - theta v|| <= tol * max(1, |theta|)
    std::uint64_t seed = 0x5eedu;  // start vector when none is supplied
};

// Restarted Arnoldi for a general complex operator, full reorthogonalization.
// When the subspace reaches the operator dimension this reduces to an exact
// Hessenberg factorization, so small problems are solved exactly.
std::vector<EigPair> arnoldi_eigs(Eigen::Index dim, const MatVec& op, const ArnoldiOptions& opts,
                                  const Vector* start = nullptr);

struct LanczosOptions {
    int max_subspace = 48;
    int max_restarts = 200;
    double tol = 1e-12;  // residual tolerance, relative to the Ritz value scale
};

// Restarted Lanczos (Hermitian operator) for the smallest eigenpair.
std::pair<double, Vector> lanczos_smallest(Eigen::Index dim, const MatVec& op, const Vector& start,
                                           const LanczosOptions& opts);

struct GmresOptions {
    int restart = 30;
    int max_iters = 600;
    double tol = 1e-10;  // relative to ||b||
};

struct GmresReport {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

Vector gmres(Eigen::Index dim, const MatVec& op, const Vector& b, const Vector* x0,
             const GmresOptions& opts, GmresReport* report = nullptr);

} // namespace fes
