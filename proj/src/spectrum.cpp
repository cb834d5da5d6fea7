#include "fes/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fes/errors.hpp"
#include "fes/krylov.hpp"

namespace fes {

namespace {

struct RawPair {
    cxd e;  // eigenvalue of E
    Vector right;
    Vector left;
};

// Ordering on lambda = log(e): descending real part, ties by descending
// imaginary part so conjugate pairs appear in a fixed order.
bool lambda_before(const cxd& ea, const cxd& eb) {
    const double ra = std::log(std::abs(ea)), rb = std::log(std::abs(eb));
    if (std::abs(ra - rb) > 1e-12) return ra > rb;
    return std::arg(ea) > std::arg(eb);
}

void fix_phase_unit(Vector& v) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        if (a > best + 1e-15) {
            best = a;
            imax = i;
        }
    }
    if (best <= 0.0) return;
    v *= std::abs(v(imax)) / v(imax);
    v.normalize();
}

TransferSpectrum finalize(const UniformMPS& state, std::vector<RawPair> pairs, int K) {
    std::sort(pairs.begin(), pairs.end(),
              [](const RawPair& a, const RawPair& b) { return lambda_before(a.e, b.e); });
    // Never split a conjugate pair at the truncation boundary; the returned
    // multiset of non-real eigenvalues stays closed under conjugation.
    std::size_t kept = std::min<std::size_t>(K, pairs.size());
    if (kept < pairs.size()) {
        const cxd a = pairs[kept - 1].e, b = pairs[kept].e;
        const bool nonreal = std::abs(std::arg(a)) > 1e-12;
        if (nonreal && std::abs(a - std::conj(b)) < 1e-10 * std::max(1.0, std::abs(a))) ++kept;
    }
    pairs.resize(kept);

    TransferSpectrum spec;
    spec.D = state.D;
    spec.eigenvalues.reserve(pairs.size());
    spec.left_vectors.reserve(pairs.size());
    spec.right_vectors.reserve(pairs.size());
    spec.lengths.reserve(pairs.size());

    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto& p = pairs[i];
        if (i == 0) {
            // The dominant pair keeps the state normalization tr(l r) = 1.
            p.right = mat_to_vec(state.r);
            p.left = mat_to_vec(state.l);
        } else {
            fix_phase_unit(p.right);
            const cxd c = p.left.dot(p.right);
            if (std::abs(c) < 1e-10)
                throw EigensolverNoConvergence(
                    "transfer spectrum: ill-conditioned left/right pairing at index " +
                    std::to_string(i + 1));
            p.left /= std::conj(c);
        }
        const cxd lambda = std::log(p.e);
        spec.eigenvalues.push_back(lambda);
        spec.lengths.push_back(i == 0 ? std::numeric_limits<double>::infinity()
                                      : -1.0 / lambda.real());
        spec.right_vectors.push_back(std::move(p.right));
        spec.left_vectors.push_back(std::move(p.left));
    }
    return spec;
}

} // namespace

TransferSpectrum transfer_spectrum(const UniformMPS& state, int K) {
    const Eigen::Index D = state.D;
    const Eigen::Index dim = D * D;
    if (K < 1) throw KTooLarge("transfer_spectrum: K must be positive");
    if (K > dim)
        throw KTooLarge("transfer_spectrum: K = " + std::to_string(K) +
                        " exceeds the doubled-space dimension " + std::to_string(dim));

    ArnoldiOptions opts;
    opts.k = static_cast<int>(std::min<Eigen::Index>(K + 2, dim));
    opts.tol = 1e-11;

    const MatVec right_apply = [&](const Vector& v) {
        return mat_to_vec(apply_transfer_right(state.A, vec_to_mat(v, D, D)));
    };
    const MatVec left_apply = [&](const Vector& v) {
        return mat_to_vec(apply_transfer_left(state.A, vec_to_mat(v, D, D)));
    };

    const Vector start = mat_to_vec(Matrix::Identity(D, D) + state.r);
    auto right = arnoldi_eigs(dim, right_apply, opts, &start);
    auto left = arnoldi_eigs(dim, left_apply, opts, &start);

    // Left eigenvalues are conjugates of the right ones; match each right
    // pair to the closest unused left partner.
    std::vector<RawPair> pairs;
    std::vector<bool> used(left.size(), false);
    for (auto& rp : right) {
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < left.size(); ++j) {
            if (used[j]) continue;
            const double dist = std::abs(std::conj(left[j].value) - rp.value);
            if (dist < best_dist) {
                best_dist = dist;
                best = static_cast<int>(j);
            }
        }
        if (best < 0 || best_dist > 1e-8 * std::max(1.0, std::abs(rp.value)))
            throw EigensolverNoConvergence(
                "transfer_spectrum: left and right Arnoldi spectra do not match (distance " +
                std::to_string(best_dist) + ")");
        used[best] = true;
        pairs.push_back({rp.value, std::move(rp.vector), std::move(left[best].vector)});
    }
    return finalize(state, std::move(pairs), K);
}

TransferSpectrum dense_transfer_spectrum(const UniformMPS& state, int K) {
    const Eigen::Index D = state.D;
    const Eigen::Index dim = D * D;
    if (K < 1 || K > dim) throw KTooLarge("dense_transfer_spectrum: bad K");

    const Matrix E = dense_transfer_matrix(state.A);
    Eigen::ComplexEigenSolver<Matrix> es(E);
    if (es.info() != Eigen::Success)
        throw EigensolverNoConvergence("dense_transfer_spectrum: eigensolver failed");

    // Rows of V^{-1} are left eigenvectors already biorthonormal to the
    // columns of V; the shared finalize step only rescales conventions.
    const Matrix V = es.eigenvectors();
    const Matrix Vinv = V.inverse();
    std::vector<RawPair> pairs;
    pairs.reserve(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        pairs.push_back({es.eigenvalues()(i), V.col(i), Vinv.row(i).adjoint()});
    return finalize(state, std::move(pairs), K);
}

double correlation_length(const TransferSpectrum& spectrum) {
    if (spectrum.count() < 2)
        throw Error("correlation_length: spectrum needs at least two eigenvalues");
    return spectrum.lengths[1];
}

} // namespace fes
