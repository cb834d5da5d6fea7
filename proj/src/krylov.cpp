#include "fes/krylov.hpp"

#include <algorithm>
#include <cmath>

#include "fes/errors.hpp"
#include "fes/rng.hpp"

namespace fes {

namespace {

// Modified Gram-Schmidt against the first j columns of V, one refinement pass.
// Accumulated projection coefficients (both passes) land in coeffs.
void orthogonalize(const Matrix& V, int j, Vector& w, Vector* coeffs = nullptr) {
    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < j; ++i) {
            const cxd c = V.col(i).dot(w);  // conjugates the left argument
            w -= c * V.col(i);
            if (coeffs) (*coeffs)(i) += c;
        }
    }
}

} // namespace

std::vector<EigPair> arnoldi_eigs(Eigen::Index dim, const MatVec& op, const ArnoldiOptions& opts,
                                  const Vector* start) {
    const int k = opts.k;
    if (k < 1 || k > dim) throw KTooLarge("arnoldi_eigs: requested " + std::to_string(k) +
                                          " eigenpairs from dimension " + std::to_string(dim));
    // Transfer matrices of near-critical states carry clusters of moduli just
    // below the dominant one; a single-vector restart needs a wide subspace to
    // resolve them, and the matvecs are cheap relative to the rest of a sweep.
    const int m = opts.max_subspace > 0
                      ? std::min<Eigen::Index>(opts.max_subspace, dim)
                      : std::min<Eigen::Index>(std::max(12 * k, 144), dim);

    Vector v0;
    if (start && start->size() == dim && start->norm() > 0) {
        v0 = *start;
    } else {
        Rng rng(opts.seed);
        v0 = rng.gaussian_matrix(dim, 1).col(0);
    }
    v0.normalize();

    Matrix V(dim, m + 1);
    Matrix H = Matrix::Zero(m + 1, m);
    std::vector<EigPair> best;

    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        V.col(0) = v0;
        int built = m;
        bool breakdown = false;
        for (int j = 0; j < m; ++j) {
            Vector w = op(V.col(j));
            Vector h = Vector::Zero(j + 1);
            orthogonalize(V, j + 1, w, &h);
            H.col(j).head(j + 1) = h;
            const double nrm = w.norm();
            H(j + 1, j) = nrm;
            if (nrm < 1e-14) {
                // Invariant subspace reached; its Ritz pairs are exact.
                if (j + 1 >= k) {
                    built = j + 1;
                    breakdown = true;
                    break;
                }
                // More pairs wanted than the subspace holds: continue the
                // factorization in a fresh direction orthogonal to everything
                // built so far (H keeps an exact zero subdiagonal, so the
                // blocks stay decoupled and the found pairs stay exact).
                H(j + 1, j) = 0.0;
                Rng rng(opts.seed + 31u * static_cast<std::uint64_t>(j + 1));
                Vector fresh = rng.gaussian_matrix(dim, 1).col(0);
                orthogonalize(V, j + 1, fresh);
                const double fresh_nrm = fresh.norm();
                if (fresh_nrm < 1e-12) {
                    built = j + 1;  // orthogonal complement exhausted
                    breakdown = true;
                    break;
                }
                V.col(j + 1) = fresh / fresh_nrm;
                continue;
            }
            V.col(j + 1) = w / nrm;
        }

        const Matrix Hm = H.topLeftCorner(built, built);
        Eigen::ComplexEigenSolver<Matrix> es(Hm);
        if (es.info() != Eigen::Success)
            throw EigensolverNoConvergence("arnoldi_eigs: Hessenberg eigensolve failed");

        std::vector<int> order(built);
        for (int i = 0; i < built; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(es.eigenvalues()(a)) > std::abs(es.eigenvalues()(b));
        });

        const double beta = breakdown ? 0.0 : std::abs(H(built, built - 1));
        const int avail = std::min(k, built);
        best.clear();
        bool all_converged = (avail == k);
        for (int i = 0; i < avail; ++i) {
            const int idx = order[i];
            const cxd theta = es.eigenvalues()(idx);
            const Vector y = es.eigenvectors().col(idx);
            const double resid = beta * std::abs(y(built - 1));
            if (resid > opts.tol * std::max(1.0, std::abs(theta))) all_converged = false;
            Vector ritz = V.leftCols(built) * y;
            ritz.normalize();
            best.push_back({theta, std::move(ritz)});
        }
        if (all_converged || breakdown || built >= dim) {
            if (static_cast<int>(best.size()) < k)
                throw EigensolverNoConvergence(
                    "arnoldi_eigs: invariant subspace smaller than requested eigenpair count");
            return best;
        }

        // Restart from an equal-weight blend of the current best Ritz vectors;
        // the new Krylov space then favors the wanted end of the spectrum.
        v0 = Vector::Zero(dim);
        for (const auto& p : best) v0 += p.vector;
        const double nrm = v0.norm();
        if (nrm < 1e-14) {
            Rng rng(opts.seed + 17 * (restart + 1));
            v0 = rng.gaussian_matrix(dim, 1).col(0);
        }
        v0.normalize();
    }
    throw EigensolverNoConvergence("arnoldi_eigs: no convergence after " +
                                   std::to_string(opts.max_restarts) + " restarts (dim " +
                                   std::to_string(dim) + ", k " + std::to_string(k) + ")");
}

std::pair<double, Vector> lanczos_smallest(Eigen::Index dim, const MatVec& op, const Vector& start,
                                           const LanczosOptions& opts) {
    const int m = std::min<Eigen::Index>(opts.max_subspace, dim);
    Vector v0 = start;
    if (v0.size() != dim || v0.norm() == 0.0) throw Error("lanczos_smallest: bad start vector");
    v0.normalize();

    double theta = 0.0;
    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        Matrix V(dim, m);
        RVector alpha = RVector::Zero(m), beta = RVector::Zero(m);
        V.col(0) = v0;
        int built = m;
        bool breakdown = false;
        for (int j = 0; j < m; ++j) {
            Vector w = op(V.col(j));
            Vector h = Vector::Zero(j + 1);
            // Full reorthogonalization: cheap at these sizes, keeps the basis clean.
            orthogonalize(V, j + 1, w, &h);
            alpha(j) = std::real(h(j));
            built = j + 1;
            const double nrm = w.norm();
            if (j + 1 < m) {
                beta(j) = nrm;
                if (nrm < 1e-13) {
                    breakdown = true;
                    break;
                }
                V.col(j + 1) = w / nrm;
            }
        }

        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic> T =
            Eigen::MatrixXd::Zero(built, built);
        for (int j = 0; j < built; ++j) {
            T(j, j) = alpha(j);
            if (j + 1 < built) T(j, j + 1) = T(j + 1, j) = beta(j);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        int idx = 0;  // eigenvalues ascending, smallest first
        theta = es.eigenvalues()(idx);
        const Eigen::VectorXd y = es.eigenvectors().col(idx);
        Vector ritz = V.leftCols(built) * y.cast<cxd>();
        ritz.normalize();

        const Vector Ar = op(ritz);
        const double resid = (Ar - theta * ritz).norm();
        if (resid <= opts.tol * std::max(1.0, std::abs(theta)) || breakdown || built >= dim)
            return {theta, ritz};
        v0 = ritz;
    }
    throw EigensolverNoConvergence("lanczos_smallest: no convergence after " +
                                   std::to_string(opts.max_restarts) + " restarts");
}

Vector gmres(Eigen::Index dim, const MatVec& op, const Vector& b, const Vector* x0,
             const GmresOptions& opts, GmresReport* report) {
    const double bnorm = b.norm();
    Vector x = (x0 && x0->size() == dim) ? *x0 : Vector::Zero(dim);
    if (bnorm == 0.0) {
        if (report) *report = {0, 0.0, true};
        return Vector::Zero(dim);
    }

    const int m = std::min<Eigen::Index>(opts.restart, dim);
    int total_iters = 0;
    double rel = 1.0;

    while (total_iters < opts.max_iters) {
        Vector r = b - op(x);
        double rnorm = r.norm();
        rel = rnorm / bnorm;
        if (rel <= opts.tol) break;

        Matrix V(dim, m + 1);
        Matrix H = Matrix::Zero(m + 1, m);
        std::vector<cxd> cs(m), sn(m);
        Vector g = Vector::Zero(m + 1);
        V.col(0) = r / rnorm;
        g(0) = rnorm;

        int j = 0;
        for (; j < m && total_iters < opts.max_iters; ++j, ++total_iters) {
            Vector w = op(V.col(j));
            Vector h = Vector::Zero(j + 1);
            orthogonalize(V, j + 1, w, &h);
            H.col(j).head(j + 1) = h;
            const double nrm = w.norm();
            H(j + 1, j) = nrm;
            if (nrm > 1e-300) V.col(j + 1) = w / nrm;

            // Apply accumulated Givens rotations to the new column.
            for (int i = 0; i < j; ++i) {
                const cxd t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
                H(i + 1, j) = -std::conj(sn[i]) * H(i, j) + std::conj(cs[i]) * H(i + 1, j);
                H(i, j) = t;
            }
            const double denom = std::sqrt(std::norm(H(j, j)) + std::norm(H(j + 1, j)));
            if (denom == 0.0) {
                cs[j] = 1.0;
                sn[j] = 0.0;
            } else {
                cs[j] = std::conj(H(j, j)) / denom;
                sn[j] = std::conj(H(j + 1, j)) / denom;
            }
            const cxd t = cs[j] * H(j, j) + sn[j] * H(j + 1, j);
            H(j, j) = t;
            H(j + 1, j) = 0.0;
            const cxd gj = g(j);
            g(j) = cs[j] * gj;
            g(j + 1) = -std::conj(sn[j]) * gj;

            rel = std::abs(g(j + 1)) / bnorm;
            if (rel <= opts.tol || nrm <= 1e-300) {
                ++j;
                ++total_iters;
                break;
            }
        }

        // Back substitution for the least-squares coefficients.
        Vector y = Vector::Zero(j);
        for (int i = j - 1; i >= 0; --i) {
            cxd acc = g(i);
            for (int l = i + 1; l < j; ++l) acc -= H(i, l) * y(l);
            y(i) = acc / H(i, i);
        }
        x += V.leftCols(j) * y;
        if (rel <= opts.tol) break;
    }

    if (report) {
        const double final_rel = (b - op(x)).norm() / bnorm;
        *report = {total_iters, final_rel, final_rel <= opts.tol * 4};
    }
    return x;
}

} // namespace fes
