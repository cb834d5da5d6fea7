#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

// Gauss-Legendre on [0, pi]; the integrands below are smooth there, so a
// fixed high order is plenty.
template <typename F>
double integrate_0_pi(const F& f) {
    // 64-point rule on [-1, 1], nodes/weights generated by Newton on P_n.
    constexpr int n = 64;
    static double nodes[n], weights[n];
    static bool ready = false;
    if (!ready) {
        for (int i = 0; i < n; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        ready = true;
    }
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double k = 0.5 * M_PI * (nodes[i] + 1.0);
        acc += weights[i] * f(k);
    }
    return acc * 0.5 * M_PI;
}

} // namespace

double energy_density(double J, double h) {
    // e0 = -(1/2pi) int_0^pi 2 sqrt(J^2 + h^2 - 2 J h cos k) dk
    const auto omega = [&](double k) {
        return 2.0 * std::sqrt(J * J + h * h - 2.0 * J * h * std::cos(k));
    };
    return -integrate_0_pi(omega) / (2.0 * M_PI);
}

double transverse_magnetization(double J, double h) {
    const auto integrand = [&](double k) {
        const double lam = std::sqrt(J * J + h * h - 2.0 * J * h * std::cos(k));
        return (h - J * std::cos(k)) / lam;
    };
    return -integrate_0_pi(integrand) / M_PI;
}

double critical_sigma_sigma(long x) {
    if (x < 0) x = -x;
    if (x == 0) return 1.0;
    double log_rho = x * std::log(2.0 / M_PI);
    for (long k = 1; k < x; ++k)
        log_rho += (k - x) * std::log1p(-1.0 / (4.0 * double(k) * double(k)));
    return std::exp(log_rho);
}

double critical_fermion_pair(long x) {
    if (x < 1) throw std::invalid_argument("critical_fermion_pair wants x >= 1");
    return (2.0 / M_PI) * double(x) / (4.0 * double(x) * double(x) - 1.0);
}

// ---------------------------------------------------------------------------

namespace {

// H psi in the sz product basis: bit 0 means sz = +1, bit 1 means sz = -1.
void apply_h(int n, double J, double h, const Eigen::VectorXd& psi, Eigen::VectorXd& out) {
    const long dim = 1L << n;
    out.setZero();
    for (long m = 0; m < dim; ++m) {
        const double amp = psi(m);
        double diag = 0.0;
        for (int j = 0; j < n; ++j) diag += (m >> j) & 1 ? -1.0 : 1.0;
        out(m) += h * diag * amp;
        for (int j = 0; j < n; ++j) {
            const int jn = (j + 1) % n;
            const long flipped = m ^ ((1L << j) | (1L << jn));
            out(flipped) -= J * amp;
        }
    }
}

} // namespace

RingGround ed_ground(int n, double J, double h) {
    if (n < 3 || n > 22) throw std::invalid_argument("ed_ground: n out of range");
    const long dim = 1L << n;
    const int m_max = std::min<long>(320, dim);

    Eigen::MatrixXd V(dim, m_max);
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m_max);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(m_max);

    Eigen::VectorXd v = Eigen::VectorXd::Ones(dim);
    // break accidental symmetries of the all-ones start
    for (long m = 0; m < dim; ++m) v(m) += 1e-3 * std::sin(0.7 * double(m % 97));
    v.normalize();
    V.col(0) = v;

    Eigen::VectorXd w(dim);
    int built = 0;
    double theta = 0.0;
    Eigen::VectorXd u;

    for (int j = 0; j < m_max; ++j) {
        apply_h(n, J, h, V.col(j), w);
        // full reorthogonalization, two passes; alpha comes from the first pass
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i <= j; ++i) {
                const double c = V.col(i).dot(w);
                w -= c * V.col(i);
                if (pass == 0 && i == j) alpha(j) = c;
            }
        built = j + 1;
        const double nrm = w.norm();

        if (j >= 10 && (j % 10 == 0 || nrm < 1e-13 || j == m_max - 1)) {
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(built, built);
            for (int i = 0; i < built; ++i) {
                T(i, i) = alpha(i);
                if (i + 1 < built) T(i, i + 1) = T(i + 1, i) = beta(i);
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
            theta = es.eigenvalues()(0);
            u = es.eigenvectors().col(0);
            const double resid = nrm * std::abs(u(built - 1));
            if (resid < 1e-11 * std::max(1.0, std::abs(theta)) || nrm < 1e-13) break;
        }
        if (nrm < 1e-13) break;
        if (j + 1 < m_max) {
            beta(j) = nrm;
            V.col(j + 1) = w / nrm;
        }
    }
    if (u.size() == 0) throw std::runtime_error("ed_ground: lanczos did not converge");

    RingGround g;
    g.n = n;
    g.J = J;
    g.h = h;
    g.energy = theta;
    g.energy_per_site = theta / n;
    g.psi = V.leftCols(built) * u;
    g.psi.normalize();
    return g;
}

double ed_sz(const RingGround& g) {
    const long dim = 1L << g.n;
    double acc = 0.0;
    for (long m = 0; m < dim; ++m) {
        const double p = g.psi(m) * g.psi(m);
        for (int j = 0; j < g.n; ++j) acc += p * ((m >> j) & 1 ? -1.0 : 1.0);
    }
    return acc / g.n;
}

double ed_sigma_sigma(const RingGround& g, int x) {
    const long dim = 1L << g.n;
    const long mask = (1L << 0) ^ (1L << (x % g.n));
    double acc = 0.0;
    for (long m = 0; m < dim; ++m) acc += g.psi(m) * g.psi(m ^ mask);
    return acc;
}

double ed_sz_sz(const RingGround& g, int x) {
    const long dim = 1L << g.n;
    double acc = 0.0;
    for (long m = 0; m < dim; ++m) {
        const double z0 = (m & 1) ? -1.0 : 1.0;
        const double zx = (m >> (x % g.n)) & 1 ? -1.0 : 1.0;
        acc += g.psi(m) * g.psi(m) * z0 * zx;
    }
    return acc;
}

namespace {

// <psi| sx_a sx_{a+1} ... |psi> building blocks for eps. Site indices mod n.
double bond_bond(const RingGround& g, int a, int b) {
    const long dim = 1L << g.n;
    const int n = g.n;
    const long mask = (1L << (a % n)) ^ (1L << ((a + 1) % n)) ^ (1L << (b % n)) ^
                      (1L << ((b + 1) % n));
    double acc = 0.0;
    for (long m = 0; m < dim; ++m) acc += g.psi(m) * g.psi(m ^ mask);
    return acc;
}

double bond_z(const RingGround& g, int a, int b) {
    // <sx_a sx_{a+1} sz_b>
    const long dim = 1L << g.n;
    const int n = g.n;
    const long mask = (1L << (a % n)) ^ (1L << ((a + 1) % n));
    double acc = 0.0;
    for (long m = 0; m < dim; ++m) {
        const double zb = (m >> (b % n)) & 1 ? -1.0 : 1.0;
        acc += g.psi(m ^ mask) * zb * g.psi(m);
    }
    return acc;
}

} // namespace

double ed_eps_expectation(const RingGround& g, double zsign) {
    return ed_sigma_sigma(g, 1) + zsign * ed_sz(g);
}

double ed_eps_eps_connected(const RingGround& g, int x, double zsign) {
    const double full = bond_bond(g, 0, x) + zsign * bond_z(g, 0, x) +
                        zsign * bond_z(g, x, 0) + zsign * zsign * ed_sz_sz(g, x);
    const double one = ed_eps_expectation(g, zsign);
    return full - one * one;
}

double ed_string_pm(const RingGround& g, int x, bool left_plus, bool right_plus) {
    // <sE_0 prod_{j=1}^{x-1} sz_j sE'_x>, right operator acts on |psi> first.
    const long dim = 1L << g.n;
    const int n = g.n;
    if (x < 1 || x >= n) throw std::invalid_argument("ed_string_pm: x out of range");
    double acc = 0.0;
    for (long m = 0; m < dim; ++m) {
        // s+ at x needs bit x set (down -> up); s- needs it clear.
        const bool bx = (m >> (x % n)) & 1;
        if (right_plus != bx) continue;
        const long m1 = m ^ (1L << (x % n));
        double fac = 1.0;
        for (int j = 1; j < x; ++j) fac *= (m1 >> (j % n)) & 1 ? -1.0 : 1.0;
        // s+ at 0 needs bit 0 of m1 set; (bra side: <psi| s+_0 ... = conj applied)
        const bool b0 = m1 & 1;
        if (left_plus != b0) continue;
        const long m2 = m1 ^ 1L;
        acc += g.psi(m2) * fac * g.psi(m);
    }
    return acc;
}

double ed_string_z(const RingGround& g, int x) {
    const long dim = 1L << g.n;
    double acc = 0.0;
    for (long m = 0; m < dim; ++m) {
        double fac = 1.0;
        for (int j = 0; j < x; ++j) fac *= (m >> (j % g.n)) & 1 ? -1.0 : 1.0;
        acc += g.psi(m) * g.psi(m) * fac;
    }
    return acc;
}

} // namespace oracle
