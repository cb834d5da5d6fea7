#include "fes/vumps.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "fes/errors.hpp"
#include "fes/krylov.hpp"
#include "fes/rng.hpp"

namespace fes {
namespace {

using OpTable = std::vector<std::vector<Matrix>>;  // d x d table of D x D blocks

struct MixedState {
    int d = 0;
    Eigen::Index D = 0;
    SiteTensor AL, AR, AC;
    Matrix C;
};

Vector site_tensor_to_vec(const SiteTensor& X) {
    const Eigen::Index D = X[0].rows();
    Vector v(static_cast<Eigen::Index>(X.size()) * D * D);
    for (std::size_t s = 0; s < X.size(); ++s)
        v.segment(static_cast<Eigen::Index>(s) * D * D, D * D) = mat_to_vec(X[s]);
    return v;
}

SiteTensor vec_to_site_tensor(const Vector& v, int d, Eigen::Index D) {
    SiteTensor X(d);
    for (int s = 0; s < d; ++s) X[s] = vec_to_mat(v.segment(s * D * D, D * D), D, D);
    return X;
}

Matrix stack_rows(const SiteTensor& X) {
    const Eigen::Index D = X[0].rows();
    Matrix m(static_cast<Eigen::Index>(X.size()) * D, D);
    for (std::size_t s = 0; s < X.size(); ++s) m.block(s * D, 0, D, D) = X[s];
    return m;
}

SiteTensor unstack_rows(const Matrix& m, int d, Eigen::Index D) {
    SiteTensor X(d);
    for (int s = 0; s < d; ++s) X[s] = m.block(s * D, 0, D, D);
    return X;
}

Matrix stack_cols(const SiteTensor& X) {
    const Eigen::Index D = X[0].rows();
    Matrix m(D, static_cast<Eigen::Index>(X.size()) * D);
    for (std::size_t s = 0; s < X.size(); ++s) m.block(0, s * D, D, D) = X[s];
    return m;
}

SiteTensor unstack_cols(const Matrix& m, int d, Eigen::Index D) {
    SiteTensor X(d);
    for (int s = 0; s < d; ++s) X[s] = m.block(0, s * D, D, D);
    return X;
}

Matrix polar_unitary(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

// Gauge an arbitrary normalized state into {AL, AR, AC, C}.  The square-root
// transforms are only as accurate as cond(l), so both isometries are polished
// with a polar projection; the first iteration corrects the remaining slop.
MixedState mixed_from_umps(const UniformMPS& psi) {
    MixedState ms;
    ms.d = psi.d;
    ms.D = psi.D;
    Matrix X, Xi, Y, Yi;
    hermitian_sqrt_pair(psi.l, X, Xi);
    hermitian_sqrt_pair(psi.r, Y, Yi);
    ms.AL.resize(psi.d);
    ms.AR.resize(psi.d);
    for (int s = 0; s < psi.d; ++s) {
        ms.AL[s] = X * psi.A[s] * Xi;
        ms.AR[s] = Yi * psi.A[s] * Y;
    }
    ms.AL = unstack_rows(polar_unitary(stack_rows(ms.AL)), ms.d, ms.D);
    ms.AR = unstack_cols(polar_unitary(stack_cols(ms.AR)), ms.d, ms.D);
    ms.C = X * Y;
    ms.C /= ms.C.norm();
    ms.AC.resize(psi.d);
    for (int s = 0; s < psi.d; ++s) ms.AC[s] = ms.AL[s] * ms.C;
    return ms;
}

struct Environments {
    Matrix HL, HR;  // solved left/right energy environments, Hermitian
    double eL = 0.0, eR = 0.0;
    OpTable M1;  // M1[u][s] = AL[u]+ AL[s]
    OpTable N;   // N[v][t]  = sum_{u,s} h((u,v),(s,t)) M1[u][s]
    OpTable P;   // P[u][s]  = sum_{v,t} h((u,v),(s,t)) AR[t] AR[v]+
};

void build_environments(const Matrix& h2, const MixedState& ms, Environments& env, Matrix& hl_guess,
                        Matrix& hr_guess, double inner_tol) {
    const Eigen::Index D = ms.D;
    const int d = ms.d;
    const Matrix id = Matrix::Identity(D, D);
    const Matrix GL = apply_block_transfer_left(ms.AL, h2, 2, id);
    const Matrix GR = apply_block_transfer_right(ms.AR, h2, 2, id);
    const Matrix rhoR = ms.C * ms.C.adjoint();
    const Matrix rhoL = ms.C.adjoint() * ms.C;
    env.eL = std::real(frob_inner(GL, rhoR));
    env.eR = std::real(frob_inner(rhoL, GR));

    GmresOptions go;
    go.restart = 60;
    go.max_iters = 6000;
    go.tol = inner_tol;

    const MatVec left_op = [&](const Vector& v) {
        const Matrix x = vec_to_mat(v, D, D);
        Matrix out = x - apply_transfer_left(ms.AL, x) + (x * rhoR).trace() * id;
        return mat_to_vec(out);
    };
    {
        const Vector rhs = mat_to_vec(Matrix(GL - env.eL * id));
        Vector x0;
        const Vector* x0p = nullptr;
        if (hl_guess.size() == D * D) {
            x0 = mat_to_vec(hl_guess);
            x0p = &x0;
        }
        const Matrix hl = vec_to_mat(gmres(D * D, left_op, rhs, x0p, go), D, D);
        env.HL = 0.5 * (hl + hl.adjoint());
        hl_guess = env.HL;
    }

    const MatVec right_op = [&](const Vector& v) {
        const Matrix x = vec_to_mat(v, D, D);
        Matrix out = x - apply_transfer_right(ms.AR, x) + (rhoL * x).trace() * id;
        return mat_to_vec(out);
    };
    {
        const Vector rhs = mat_to_vec(Matrix(GR - env.eR * id));
        Vector x0;
        const Vector* x0p = nullptr;
        if (hr_guess.size() == D * D) {
            x0 = mat_to_vec(hr_guess);
            x0p = &x0;
        }
        const Matrix hr = vec_to_mat(gmres(D * D, right_op, rhs, x0p, go), D, D);
        env.HR = 0.5 * (hr + hr.adjoint());
        hr_guess = env.HR;
    }

    auto h = [&](int u, int v, int s, int t) { return h2(u * d + v, s * d + t); };
    env.M1.assign(d, std::vector<Matrix>(d));
    OpTable M2(d, std::vector<Matrix>(d));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            env.M1[a][b] = ms.AL[a].adjoint() * ms.AL[b];
            M2[a][b] = ms.AR[a] * ms.AR[b].adjoint();
        }
    env.N.assign(d, std::vector<Matrix>(d));
    env.P.assign(d, std::vector<Matrix>(d));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            Matrix n = Matrix::Zero(D, D);
            Matrix p = Matrix::Zero(D, D);
            for (int u = 0; u < d; ++u)
                for (int s = 0; s < d; ++s) n += h(u, a, s, b) * env.M1[u][s];
            for (int v = 0; v < d; ++v)
                for (int t = 0; t < d; ++t) p += h(a, v, b, t) * M2[t][v];
            // Subtract the current bond energy so H_AC and H_C annihilate the
            // fixed point; without the shift the B-gradient saturates at |e|.
            if (a == b) {
                n -= env.eL * id;
                p -= env.eR * id;
            }
            env.N[a][b] = n;
            env.P[a][b] = p;
        }
}

SiteTensor apply_center_site(const MixedState& ms, const Environments& env, const SiteTensor& X) {
    const int d = ms.d;
    SiteTensor out(d);
    for (int a = 0; a < d; ++a) {
        Matrix acc = env.HL * X[a] + X[a] * env.HR;
        for (int b = 0; b < d; ++b) acc += env.N[a][b] * X[b] + X[b] * env.P[a][b];
        out[a] = std::move(acc);
    }
    return out;
}

Matrix apply_center_bond(const MixedState& ms, const Environments& env, const Matrix& Y) {
    const int d = ms.d;
    Matrix out = env.HL * Y + Y * env.HR;
    for (int u = 0; u < d; ++u)
        for (int s = 0; s < d; ++s) out += env.M1[u][s] * Y * env.P[u][s];
    return out;
}

double gradient_norm_now(const MixedState& ms, const Environments& env) {
    const SiteTensor hac = apply_center_site(ms, env, ms.AC);
    const Matrix hc = apply_center_bond(ms, env, ms.C);
    double acc = 0.0;
    for (int s = 0; s < ms.d; ++s) acc += (hac[s] - ms.AL[s] * hc).squaredNorm();
    return std::sqrt(acc);
}

void perturb_center(MixedState& ms, Rng& rng, double eta) {
    SiteTensor g(ms.d);
    double gn = 0.0;
    for (int s = 0; s < ms.d; ++s) {
        g[s] = rng.gaussian_matrix(ms.D, ms.D);
        gn += g[s].squaredNorm();
    }
    gn = std::sqrt(gn);
    double an = 0.0;
    for (int s = 0; s < ms.d; ++s) {
        ms.AC[s] += (eta / gn) * g[s];
        an += ms.AC[s].squaredNorm();
    }
    an = std::sqrt(an);
    for (int s = 0; s < ms.d; ++s) ms.AC[s] /= an;
    const Matrix gc = rng.gaussian_matrix(ms.D, ms.D);
    ms.C += (eta / gc.norm()) * gc;
    ms.C /= ms.C.norm();
}

void update_isometries(MixedState& ms) {
    const Matrix uc = polar_unitary(ms.C);
    ms.AL = unstack_rows(Matrix(polar_unitary(stack_rows(ms.AC)) * uc.adjoint()), ms.d, ms.D);
    ms.AR = unstack_cols(Matrix(uc.adjoint() * polar_unitary(stack_cols(ms.AC))), ms.d, ms.D);
}

}  // namespace

std::pair<UniformMPS, SolveReport> solve_ground_state(const SpinChainModel& model, int D,
                                                      const VumpsOptions& opts,
                                                      const UniformMPS* init) {
    const auto t0 = std::chrono::steady_clock::now();
    const int d = model.d;
    if (d < 2 || D < 1) throw InitDimensionMismatch("solve_ground_state: need d >= 2 and D >= 1");
    if (model.h2.rows() != d * d || model.h2.cols() != d * d)
        throw NonHermitianHamiltonian("solve_ground_state: h2 must be d^2 x d^2");
    if ((model.h2 - model.h2.adjoint()).cwiseAbs().maxCoeff() > 1e-14)
        throw NonHermitianHamiltonian("solve_ground_state: h2 is not Hermitian to 1e-14");
    if (opts.tol <= 0) throw ConfigError("solve_ground_state: tol must be positive");
    if (init) {
        if (init->d != d)
            throw InitDimensionMismatch("solve_ground_state: init has physical dimension " +
                                        std::to_string(init->d) + ", model needs " + std::to_string(d));
        if (init->D != D)
            throw InitDimensionMismatch("solve_ground_state: init has bond dimension " +
                                        std::to_string(init->D) + ", requested " + std::to_string(D));
    }

    Rng rng(opts.seed);
    UniformMPS psi0 = init ? normalized(*init) : random_umps(D, d, opts.seed);
    MixedState ms = mixed_from_umps(psi0);

    Environments env;
    Matrix hl_guess, hr_guess;
    double grad = std::numeric_limits<double>::infinity();
    double anchor = std::numeric_limits<double>::infinity();
    int window_start = 0;
    bool perturbed = false;
    bool converged = false;
    int iterations = 0;

    LanczosOptions lanc;
    lanc.max_restarts = 400;

    for (int it = 0; it < opts.max_iter; ++it) {
        const double inner_tol =
            std::isfinite(grad) ? std::clamp(1e-2 * grad, 1e-12, 1e-5) : 1e-5;
        build_environments(model.h2, ms, env, hl_guess, hr_guess, inner_tol);
        grad = gradient_norm_now(ms, env);
        if (grad <= opts.tol) {
            converged = true;
            break;
        }
        if (it - window_start >= 50) {
            if (anchor - grad < 1e-3 * anchor && !perturbed) {
                perturb_center(ms, rng, 1e-2);
                update_isometries(ms);
                perturbed = true;
                window_start = it;
                anchor = grad;
                continue;
            }
            window_start = it;
            anchor = grad;
        } else if (!std::isfinite(anchor)) {
            anchor = grad;
        }

        const double solver_tol = std::clamp(1e-2 * grad, 1e-12, 1e-5);
        lanc.tol = solver_tol;
        lanc.max_subspace = static_cast<int>(std::min<Eigen::Index>(48, d * ms.D * ms.D));

        const MatVec hac_op = [&](const Vector& v) {
            return site_tensor_to_vec(apply_center_site(ms, env, vec_to_site_tensor(v, d, ms.D)));
        };
        const auto [th_ac, v_ac] = lanczos_smallest(d * ms.D * ms.D, hac_op, site_tensor_to_vec(ms.AC), lanc);
        (void)th_ac;

        LanczosOptions lanc_c = lanc;
        lanc_c.max_subspace = static_cast<int>(std::min<Eigen::Index>(48, ms.D * ms.D));
        const MatVec hc_op = [&](const Vector& v) {
            return mat_to_vec(apply_center_bond(ms, env, vec_to_mat(v, ms.D, ms.D)));
        };
        const auto [th_c, v_c] = lanczos_smallest(ms.D * ms.D, hc_op, mat_to_vec(ms.C), lanc_c);
        (void)th_c;

        ms.AC = vec_to_site_tensor(v_ac, d, ms.D);
        ms.C = vec_to_mat(v_c, ms.D, ms.D);
        update_isometries(ms);
        iterations = it + 1;
    }

    UniformMPS raw;
    raw.A = ms.AL;
    raw.d = d;
    raw.D = D;
    raw.gauge = Gauge::Raw;
    UniformMPS out = canonicalize(normalized(raw), Gauge::MixedCanonical);

    SolveReport report;
    report.D = D;
    report.energy_density =
        std::real(frob_inner(out.l, apply_block_transfer_right(out.A, model.h2, 2, out.r)));
    report.gradient_norm = grad;
    report.iterations = iterations;
    report.converged = converged;
    report.seed = opts.seed;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(out), report};
}

}  // namespace fes
