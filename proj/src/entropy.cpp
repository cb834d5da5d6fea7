#include "fes/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "fes/errors.hpp"
#include "fes/spin_chain.hpp"

namespace fes {

namespace {

void require_fixed_points(const UniformMPS& state, const char* where) {
    if (state.empty() || state.l.size() == 0 || state.r.size() == 0)
        throw NotNormalized(std::string(where) + ": state carries no fixed points; call normalized() first");
}

Matrix psd_sqrt_checked(const Matrix& m, const char* what) {
    double min_eig = 0.0;
    Matrix root = hermitian_sqrt(m, &min_eig);
    if (min_eig < -1e-12)
        throw NonPositiveFixedPoint(std::string(what) + " has eigenvalue " + std::to_string(min_eig) +
                                    " below the -1e-12 clipping threshold");
    return root;
}

// Entropy and Schmidt list from unnormalized weights; clips the roundoff
// window [-1e-12, 0) to zero and renormalizes.
void finish_record(EntropyRecord& rec, std::vector<double> weights, const char* what) {
    double total = 0.0;
    for (double& p : weights) {
        if (p < 0.0) {
            if (p < -1e-12)
                throw NonPositiveFixedPoint(std::string(what) + " spectrum has eigenvalue " +
                                            std::to_string(p) + " below the -1e-12 clipping threshold");
            p = 0.0;
        }
        total += p;
    }
    if (total <= 0.0) throw NonPositiveFixedPoint(std::string(what) + " spectrum sums to zero");
    double S = 0.0;
    rec.schmidt.clear();
    rec.schmidt.reserve(weights.size());
    for (double p : weights) {
        const double q = p / total;
        if (q > 0.0) S -= q * std::log(q);
        rec.schmidt.push_back(std::sqrt(q));
    }
    std::sort(rec.schmidt.begin(), rec.schmidt.end(), std::greater<double>());
    rec.S = S;
}

} // namespace

EntropyRecord half_line_entropy(const UniformMPS& state) {
    require_fixed_points(state, "half_line_entropy");
    const Matrix root_l = psd_sqrt_checked(state.l, "left fixed point");
    const Matrix root_r = psd_sqrt_checked(state.r, "right fixed point");
    Eigen::JacobiSVD<Matrix> svd(root_l * root_r);
    const RVector sv = svd.singularValues();

    EntropyRecord rec;
    rec.D = state.D;
    rec.kind = CutKind::HalfLine;
    rec.x = 0;
    std::vector<double> weights(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) weights[i] = sv(i) * sv(i);
    finish_record(rec, std::move(weights), "half-line Schmidt");
    return rec;
}

EntropyRecord interval_entropy(const UniformMPS& state, long x, int max_bond) {
    require_fixed_points(state, "interval_entropy");
    if (x < 1) throw ConfigError("interval_entropy: interval length must be at least one site");
    if (state.D > max_bond)
        throw BondDimensionTooLarge("interval_entropy: D = " + std::to_string(state.D) +
                                    " exceeds the dense-work cap " + std::to_string(max_bond));
    const int D = state.D;
    const Eigen::Index dim = static_cast<Eigen::Index>(D) * D;

    Matrix power = Matrix::Identity(dim, dim);
    {
        Matrix base = dense_transfer_matrix(state.A);
        long n = x;
        while (n > 0) {
            if (n & 1) power = power * base;
            base = base * base;
            n >>= 1;
        }
    }

    // Index swap: the window Gram matrix pairs the two ket layers against the
    // two bra layers, G[(p,q),(u,v)] = E^x[(u,p),(v,q)].
    Matrix gram(dim, dim);
    for (int p = 0; p < D; ++p)
        for (int q = 0; q < D; ++q)
            for (int u = 0; u < D; ++u)
                for (int v = 0; v < D; ++v)
                    gram(p * D + q, u * D + v) = power(u * D + p, v * D + q);

    const Matrix root_l = psd_sqrt_checked(state.l, "left fixed point");
    const Matrix root_r = psd_sqrt_checked(state.r, "right fixed point");
    const Matrix k_half = kron(root_l.transpose(), root_r);
    Matrix m = k_half * gram * k_half;
    m = (m + m.adjoint()) / 2.0;

    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const RVector ev = es.eigenvalues();

    EntropyRecord rec;
    rec.D = state.D;
    rec.kind = CutKind::Interval;
    rec.x = x;
    std::vector<double> weights(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) weights[i] = ev(i);
    finish_record(rec, std::move(weights), "interval density matrix");
    return rec;
}

std::string cut_kind_name(CutKind kind) {
    return kind == CutKind::HalfLine ? "half_line" : "interval";
}

} // namespace fes
