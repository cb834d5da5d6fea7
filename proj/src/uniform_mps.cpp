#include "fes/uniform_mps.hpp"

#include <cmath>

#include "fes/errors.hpp"
#include "fes/krylov.hpp"
#include "fes/rng.hpp"

namespace fes {

std::string gauge_name(Gauge g) {
    switch (g) {
        case Gauge::Raw: return "raw";
        case Gauge::LeftCanonical: return "left_canonical";
        case Gauge::RightCanonical: return "right_canonical";
        case Gauge::MixedCanonical: return "mixed_canonical";
    }
    return "unknown";
}

Matrix apply_transfer_right(const SiteTensor& A, const Matrix& rho) {
    Matrix acc = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& As : A) acc.noalias() += As * rho * As.adjoint();
    return acc;
}

Matrix apply_transfer_left(const SiteTensor& A, const Matrix& sigma) {
    Matrix acc = Matrix::Zero(sigma.rows(), sigma.cols());
    for (const auto& As : A) acc.noalias() += As.adjoint() * sigma * As;
    return acc;
}

Matrix apply_op_transfer_right(const SiteTensor& A, const Matrix& op, const Matrix& rho) {
    const int d = static_cast<int>(A.size());
    Matrix acc = Matrix::Zero(rho.rows(), rho.cols());
    for (int s = 0; s < d; ++s) {
        Matrix mid = Matrix::Zero(rho.rows(), rho.cols());
        for (int t = 0; t < d; ++t)
            if (op(s, t) != 0.0) mid.noalias() += op(s, t) * (A[t] * rho);
        acc.noalias() += mid * A[s].adjoint();
    }
    return acc;
}

Matrix apply_op_transfer_left(const SiteTensor& A, const Matrix& op, const Matrix& sigma) {
    const int d = static_cast<int>(A.size());
    Matrix acc = Matrix::Zero(sigma.rows(), sigma.cols());
    for (int t = 0; t < d; ++t) {
        Matrix mid = Matrix::Zero(sigma.rows(), sigma.cols());
        for (int s = 0; s < d; ++s)
            if (op(s, t) != 0.0) mid.noalias() += std::conj(op(s, t)) * (sigma * A[s]);
        acc.noalias() += A[t].adjoint() * mid;
    }
    return acc;
}

namespace {

// Site products A^{s_1} ... A^{s_f} for all d^f physical multi-indices, with
// site 1 on the most significant digit (Kronecker convention).
std::vector<Matrix> site_products(const SiteTensor& A, int footprint) {
    const int d = static_cast<int>(A.size());
    std::vector<Matrix> prods;
    prods.reserve(1);
    prods.push_back(Matrix::Identity(A[0].rows(), A[0].cols()));
    for (int site = 0; site < footprint; ++site) {
        std::vector<Matrix> next;
        next.reserve(prods.size() * d);
        for (const auto& p : prods)
            for (int s = 0; s < d; ++s) next.push_back(p * A[s]);
        prods = std::move(next);
    }
    return prods;
}

} // namespace

Matrix apply_block_transfer_right(const SiteTensor& A, const Matrix& B, int footprint,
                                  const Matrix& rho) {
    const auto P = site_products(A, footprint);
    const auto n = static_cast<Eigen::Index>(P.size());
    Matrix acc = Matrix::Zero(rho.rows(), rho.cols());
    for (Eigen::Index S = 0; S < n; ++S) {
        Matrix q = Matrix::Zero(rho.rows(), rho.cols());
        bool any = false;
        for (Eigen::Index T = 0; T < n; ++T) {
            if (B(S, T) != 0.0) {
                q.noalias() += B(S, T) * P[T];
                any = true;
            }
        }
        if (any) acc.noalias() += q * rho * P[S].adjoint();
    }
    return acc;
}

Matrix apply_block_transfer_left(const SiteTensor& A, const Matrix& B, int footprint,
                                 const Matrix& sigma) {
    const auto P = site_products(A, footprint);
    const auto n = static_cast<Eigen::Index>(P.size());
    Matrix acc = Matrix::Zero(sigma.rows(), sigma.cols());
    for (Eigen::Index T = 0; T < n; ++T) {
        Matrix q = Matrix::Zero(sigma.rows(), sigma.cols());
        bool any = false;
        for (Eigen::Index S = 0; S < n; ++S) {
            if (B(S, T) != 0.0) {
                q.noalias() += std::conj(B(S, T)) * (sigma * P[S]);
                any = true;
            }
        }
        if (any) acc.noalias() += P[T].adjoint() * q;
    }
    return acc;
}

Matrix dense_transfer_matrix(const SiteTensor& A) {
    const Eigen::Index D = A[0].rows();
    Matrix E = Matrix::Zero(D * D, D * D);
    for (const auto& As : A) {
        // E[(i,k),(j,l)] += A(i,j) conj(A(k,l)) is the Kronecker A (x) conj(A)
        // in the (i,k) -> i*D + k flattening.
        for (Eigen::Index i = 0; i < D; ++i)
            for (Eigen::Index k = 0; k < D; ++k)
                for (Eigen::Index j = 0; j < D; ++j)
                    for (Eigen::Index m = 0; m < D; ++m)
                        E(i * D + k, j * D + m) += As(i, j) * std::conj(As(k, m));
    }
    return E;
}

UniformMPS random_umps(int D, int d, std::uint64_t seed) {
    Rng rng(seed);
    UniformMPS st;
    st.D = D;
    st.d = d;
    st.gauge = Gauge::Raw;
    st.A.reserve(d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(D));
    for (int s = 0; s < d; ++s) st.A.push_back(rng.gaussian_matrix(D, D, scale));
    return normalized(st);
}

namespace {

// Dominant left/right fixed points by Arnoldi on the doubled space, with the
// two largest moduli returned for the injectivity check.
struct DominantData {
    cxd e1, e2;
    Matrix l, r;
};

DominantData dominant_pair(const SiteTensor& A) {
    const Eigen::Index D = A[0].rows();
    const Eigen::Index dim = D * D;
    const int k = dim > 1 ? 2 : 1;

    ArnoldiOptions opts;
    opts.k = k;
    opts.tol = 1e-13;

    const MatVec right_apply = [&](const Vector& v) {
        return mat_to_vec(apply_transfer_right(A, vec_to_mat(v, D, D)));
    };
    const MatVec left_apply = [&](const Vector& v) {
        return mat_to_vec(apply_transfer_left(A, vec_to_mat(v, D, D)));
    };

    // A PSD-looking start (vec of the identity) keeps the dominant direction
    // in the initial Krylov space and the whole computation deterministic.
    const Vector start = mat_to_vec(Matrix::Identity(D, D));
    auto right = arnoldi_eigs(dim, right_apply, opts, &start);
    auto left = arnoldi_eigs(dim, left_apply, opts, &start);

    DominantData out;
    out.e1 = right[0].value;
    out.e2 = (k > 1) ? right[1].value : cxd(0.0, 0.0);
    out.r = vec_to_mat(right[0].vector, D, D);
    out.l = vec_to_mat(left[0].vector, D, D);
    return out;
}

// Projects a fixed-point candidate onto the Hermitian PSD cone. For an
// injective MPS the dominant eigenvector is Hermitian PSD up to the global
// eigenvector phase, which the trace (positive for a PSD matrix) recovers.
Matrix hermitize_fixed_point(const Matrix& m, const char* which) {
    const cxd tr = m.trace();
    if (std::abs(tr) < 1e-14 * std::max(1.0, m.norm()))
        throw NonPositiveFixedPoint(std::string("fixed point ") + which +
                                    " has vanishing trace, not a PSD fixed point");
    const Matrix rotated = m * (std::abs(tr) / tr);
    Matrix h = (rotated + rotated.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo < -1e-10 * std::max(1.0, hi))
        throw NonPositiveFixedPoint(std::string("fixed point ") + which +
                                    " has a negative eigenvalue " + std::to_string(lo));
    return h;
}

} // namespace

UniformMPS normalized(const UniformMPS& state) {
    if (state.empty()) throw Error("normalized: empty state");
    UniformMPS out = state;
    const auto dom = dominant_pair(state.A);

    const double mag = std::abs(dom.e1);
    if (state.D > 1) {
        // Gap measured in the normalization where |e_1| = 1.
        const double gap = (mag - std::abs(dom.e2)) / mag;
        if (gap < 1e-12)
            throw DegenerateDominantEigenvalue(
                "transfer operator dominant eigenvalue is degenerate (moduli gap " +
                std::to_string(gap) + ")");
    }
    if (mag <= 0.0) throw Error("normalized: zero dominant eigenvalue");

    const double rescale = 1.0 / std::sqrt(mag);
    for (auto& As : out.A) As *= rescale;

    Matrix l = hermitize_fixed_point(dom.l, "l");
    Matrix r = hermitize_fixed_point(dom.r, "r");
    // Split the pairing normalization so that tr(r) = 1 and tr(l r) = 1.
    r /= r.trace().real();
    const double pairing = (l * r).trace().real();
    if (pairing <= 0.0) throw NonPositiveFixedPoint("fixed point pairing tr(l r) <= 0");
    l /= pairing;
    out.l = std::move(l);
    out.r = std::move(r);
    out.gauge = Gauge::Raw;
    return out;
}

UniformMPS canonicalize(const UniformMPS& state, Gauge mode) {
    UniformMPS base = normalized(state);
    if (mode == Gauge::Raw) return base;

    const Eigen::Index D = base.D;
    Matrix X, Xi;  // l = X+ X with X Hermitian; Xi its (regularized) inverse
    hermitian_sqrt_pair(base.l, X, Xi);
    Matrix Y, Yi;  // r = Y Y+
    hermitian_sqrt_pair(base.r, Y, Yi);

    UniformMPS out = base;
    if (mode == Gauge::LeftCanonical) {
        for (auto& As : out.A) As = X * As * Xi;
    } else if (mode == Gauge::RightCanonical) {
        for (auto& As : out.A) As = Yi * As * Y;
    } else {
        // Mixed canonical: left-orthonormal tensor, then a unitary rotation
        // that diagonalizes the center C = X Y, so r becomes the squared
        // Schmidt spectrum in descending order.
        const Matrix C = X * Y;
        Eigen::BDCSVD<Matrix> svd(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Matrix& U = svd.matrixU();
        for (auto& As : out.A) As = U.adjoint() * (X * As * Xi) * U;
    }

    // Recompute the fixed points of the transformed tensor from scratch. The
    // gauge transform inherits the conditioning of l and r, so the cheap
    // algebraic updates (identity, X r X+, ...) can be several digits worse
    // than a fresh eigensolve; this keeps the stored residuals at solver
    // accuracy in every gauge.
    out = normalized(out);
    out.gauge = mode;
    return out;
}

FixedPointResiduals fixed_point_residuals(const UniformMPS& state) {
    FixedPointResiduals res;
    const Matrix el = apply_transfer_left(state.A, state.l);
    const Matrix er = apply_transfer_right(state.A, state.r);
    res.left = (el - state.l).norm();
    res.right = (er - state.r).norm();
    res.pairing = std::abs((state.l * state.r).trace() - cxd(1.0, 0.0));
    // Generalized Rayleigh quotient <l, E(r)> / <l, r> estimates e_1.
    const cxd num = (state.l * er).trace();
    const cxd den = (state.l * state.r).trace();
    res.eigenvalue = (std::abs(den) > 0.0) ? std::abs(num / den - 1.0) : 1.0;
    return res;
}

cxd onsite_expectation_value(const UniformMPS& state, const Matrix& op) {
    const Matrix applied = apply_op_transfer_right(state.A, op, state.r);
    return (state.l * applied).trace();
}

} // namespace fes
