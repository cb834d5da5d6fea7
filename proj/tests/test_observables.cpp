#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <vector>

#include "fes/correlator.hpp"
#include "fes/dataset.hpp"
#include "fes/entropy.hpp"
#include "fes/errors.hpp"
#include "fes/insertions.hpp"
#include "fes/spin_chain.hpp"
#include "fes/uniform_mps.hpp"
#include "fes/vumps.hpp"
#include "oracles.hpp"

using fes::cxd;
using fes::Matrix;
using fes::UniformMPS;

namespace {

UniformMPS critical_state(int D) {
    auto model = fes::ising_model(1.0, 1.0);
    return fes::solve_ground_state(model, D).first;
}

// Brute-force reduced density matrix of a window of x sites, built in the
// d^x-dimensional physical space: rho(t, s) = tr(l A^{t_1}..A^{t_x} r
// (A^{s_1}..A^{s_x})^+). Exponential in x, independent of the bond-space
// reshuffle the library uses.
Matrix window_rho(const UniformMPS& st, int x) {
    const int dim = 1 << x;
    std::vector<Matrix> chain(dim);
    for (int idx = 0; idx < dim; ++idx) {
        Matrix m = Matrix::Identity(st.D, st.D);
        for (int site = x - 1; site >= 0; --site) m = m * st.A[(idx >> site) & 1];
        chain[idx] = std::move(m);
    }
    Matrix rho(dim, dim);
    for (int t = 0; t < dim; ++t)
        for (int s = 0; s < dim; ++s)
            rho(t, s) = (st.l * chain[t] * st.r * chain[s].adjoint()).trace();
    return rho;
}

double entropy_of(const Matrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((rho + rho.adjoint()) / 2.0);
    double S = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()(i);
        if (p > 1e-14) S -= p * std::log(p);
    }
    return S;
}

} // namespace

TEST_CASE("the identity correlator is one and its derivative vanishes") {
    auto st = fes::normalized(fes::random_umps(4, 2, 12));

    fes::OperatorInsertion id;
    id.label = "one";
    id.block = fes::identity2();
    id.connected = false;
    for (long x : {1L, 3L, 7L})
        CHECK(std::abs(fes::two_point_value(st, id, x) - cxd(1.0, 0.0)) < 1e-12);

    auto did = fes::discrete_derivative(id, 1);
    for (long x : {2L, 5L}) CHECK(std::abs(fes::two_point_value(st, did, x)) < 1e-12);
}

TEST_CASE("discrete derivatives carry binomial weights on widened blocks") {
    auto sig = fes::named_insertion("sigma");
    auto d2 = fes::discrete_derivative(sig, 2);
    CHECK(d2.footprint == 3);
    CHECK(d2.level == 2);

    const Matrix I = fes::identity2(), X = fes::pauli_x();
    Matrix want = fes::kron(fes::kron(X, I), I) - 2.0 * fes::kron(fes::kron(I, X), I) +
                  fes::kron(fes::kron(I, I), X);
    CHECK((d2.block - want).norm() < 1e-14);

    CHECK(fes::named_insertion("d3sigma").footprint == 4);
    CHECK(fes::named_insertion("deps").footprint == 3);
    CHECK_THROWS_AS(fes::discrete_derivative(fes::named_insertion("mu"), 1), fes::Error);
    CHECK_THROWS_AS(fes::named_insertion("nope"), fes::Error);
}

TEST_CASE("the series walker and the single closure agree point by point") {
    auto st = fes::normalized(fes::random_umps(5, 2, 31));
    const std::vector<long> xs{2, 3, 5, 9};

    for (const char* label : {"sigma", "eps", "mu", "psi"}) {
        auto op = fes::named_insertion(label);
        auto series = fes::two_point_series(st, op, xs);
        REQUIRE(series.x.size() == xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const cxd direct = fes::two_point_value(st, op, xs[i]);
            CHECK(std::abs(series.G[i] - direct) < 1e-11);
        }
    }
}

TEST_CASE("correlators of Hermitian operators are real on physical states") {
    auto st = critical_state(6);
    for (const char* label : {"sigma", "eps", "mu", "dsigma"}) {
        auto series = fes::two_point_series(st, fes::named_insertion(label), {2, 4, 8});
        for (const cxd& g : series.G) CHECK(std::abs(g.imag()) < 1e-9);
    }
}

TEST_CASE("correlators are gauge invariant") {
    auto st = fes::normalized(fes::random_umps(4, 2, 47));
    const std::vector<long> xs{2, 3, 4};
    for (const char* label : {"sigma", "eps", "mu"}) {
        auto op = fes::named_insertion(label);
        auto base = fes::two_point_series(st, op, xs);
        for (auto mode : {fes::Gauge::LeftCanonical, fes::Gauge::RightCanonical,
                          fes::Gauge::MixedCanonical}) {
            auto g = fes::canonicalize(st, mode);
            auto series = fes::two_point_series(g, op, xs);
            for (std::size_t i = 0; i < xs.size(); ++i)
                CHECK(std::abs(series.G[i] - base.G[i]) < 1e-10);
        }
    }
}

TEST_CASE("gapped correlators cluster and the connected part decays") {
    auto model = fes::ising_model(1.0, 2.0);
    auto [st, report] = fes::solve_ground_state(model, 4);
    REQUIRE(report.converged);

    auto eps = fes::named_insertion("eps");
    REQUIRE(eps.connected);
    auto conn = fes::two_point_series(st, eps, {2, 5, 10, 20, 40});
    CHECK(std::abs(conn.one_point) > 0.1);
    CHECK(std::abs(conn.G.back()) < 1e-10);

    // Reconstructing the full correlator from the connected part and the
    // recorded one-point value must match an unconnected insertion.
    auto eps_full = eps;
    eps_full.connected = false;
    for (std::size_t i = 0; i < conn.x.size(); ++i) {
        const cxd full = fes::two_point_value(st, eps_full, static_cast<long>(conn.x[i]));
        CHECK(std::abs(conn.G[i] + std::norm(conn.one_point) - full) < 1e-11);
    }

    // sigma-sigma decays exponentially once the symmetry is unbroken.
    auto sig = fes::two_point_series(st, fes::named_insertion("sigma"), {1, 5, 10, 25});
    CHECK(std::abs(sig.one_point) < 1e-8);
    CHECK(std::abs(sig.G.back()) < 1e-6 * std::abs(sig.G.front()));
}

TEST_CASE("critical correlators match the exact lattice solutions") {
    auto st = critical_state(10);

    auto sig = fes::two_point_series(st, fes::named_insertion("sigma"), {1, 2, 3, 4});
    auto psi = fes::two_point_series(st, fes::named_insertion("psi"), {1, 2, 3, 4});
    auto mu = fes::two_point_series(st, fes::named_insertion("mu"), {1, 2, 3, 4});
    auto eps = fes::two_point_series(st, fes::named_insertion("eps"), {2, 3, 4});

    for (int i = 0; i < 4; ++i) {
        const long x = i + 1;
        // sigma-x pair correlator, McCoy's product form. The envelope grows
        // with x because truncation at D = 10 bites hardest on the slowest
        // operator; a convention error would miss by orders of magnitude.
        CHECK(sig.G[i].real() ==
              doctest::Approx(oracle::critical_sigma_sigma(x)).epsilon(2e-3 * x));
        // Fermion pair with alternating sign.
        const double psi_exact =
            ((x % 2 == 1) ? 1.0 : -1.0) * oracle::critical_fermion_pair(x);
        CHECK(psi.G[i].real() == doctest::Approx(psi_exact).epsilon(1e-3));
        // Disorder string: same magnitude as sigma-sigma at the self-dual
        // point, staggered by (-1)^x.
        const double mu_exact =
            ((x % 2 == 0) ? 1.0 : -1.0) * oracle::critical_sigma_sigma(x);
        CHECK(mu.G[i].real() == doctest::Approx(mu_exact).epsilon(2e-3 * x));
    }

    // Connected energy-density correlator from Wick's theorem.
    for (int i = 0; i < 3; ++i) {
        const double x = eps.x[i];
        const double exact = (4.0 / (M_PI * M_PI)) *
                             (2.0 / (4.0 * x * x - 1.0) + 1.0 / ((2 * x - 1) * (2 * x - 1)) +
                              1.0 / ((2 * x + 1) * (2 * x + 1)));
        CHECK(eps.G[i].real() == doctest::Approx(exact).epsilon(2e-3));
    }
}

TEST_CASE("walker values sit inside the finite-ring envelope of exact diagonalization") {
    auto st = critical_state(10);
    auto g = oracle::ed_ground(16, 1.0, 1.0);

    auto sig = fes::two_point_series(st, fes::named_insertion("sigma"), {1, 2, 3});
    const double envelope[] = {0.005, 0.012, 0.025};
    for (int i = 0; i < 3; ++i) {
        const double ring = oracle::ed_sigma_sigma(g, i + 1);
        CHECK(std::abs(sig.G[i].real() / ring - 1.0) < envelope[i]);
    }

    // On the ring the disorder string equals the staggered pair correlator
    // exactly; this pins the string convention digit for digit.
    for (int x : {1, 2, 3, 4}) {
        const double lhs = oracle::ed_string_z(g, x);
        const double rhs = ((x % 2 == 0) ? 1.0 : -1.0) * oracle::ed_sigma_sigma(g, x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("interval entropies agree with the brute-force window construction") {
    auto gapped = fes::solve_ground_state(fes::ising_model(1.0, 2.0), 4).first;
    auto random3 = fes::normalized(fes::random_umps(3, 2, 83));

    for (const auto& st : {gapped, random3}) {
        for (long x : {1L, 2L, 3L, 4L}) {
            Matrix rho = window_rho(st, static_cast<int>(x));
            CHECK(std::abs(rho.trace() - cxd(1.0, 0.0)) < 1e-11);
            CHECK((rho - rho.adjoint()).norm() < 1e-11);

            auto rec = fes::interval_entropy(st, x);
            CHECK(rec.S == doctest::Approx(entropy_of(rho)).epsilon(1e-9));
            CHECK(rec.x == x);
            CHECK(rec.kind == fes::CutKind::Interval);

            double sum = 0.0, prev = 2.0;
            for (double lam : rec.schmidt) {
                CHECK(lam <= prev + 1e-12);
                prev = lam;
                sum += lam * lam;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("a long interval on a gapped state carries twice the half-line entropy") {
    auto st = fes::solve_ground_state(fes::ising_model(1.0, 1.4), 6).first;
    const double mu2 = fes::correlation_length(fes::transfer_spectrum(st, 2));
    const long x = static_cast<long>(std::ceil(20.0 * mu2));

    const auto half = fes::half_line_entropy(st);
    const auto interval = fes::interval_entropy(st, x);
    CHECK(interval.S == doctest::Approx(2.0 * half.S).epsilon(1e-6));
}

TEST_CASE("entropies grow with the interval on critical states and saturate on gapped ones") {
    auto crit = critical_state(8);
    double prev = 0.0;
    for (long x : {1L, 2L, 4L, 8L}) {
        const double S = fes::interval_entropy(crit, x).S;
        CHECK(S > prev - 1e-9);
        prev = S;
    }

    auto gapped = fes::solve_ground_state(fes::ising_model(1.0, 3.0), 4).first;
    const double s8 = fes::interval_entropy(gapped, 8).S;
    const double s16 = fes::interval_entropy(gapped, 16).S;
    CHECK(std::abs(s16 - s8) < 1e-6);
}

TEST_CASE("half-line entropy edge cases") {
    // A D = 1 state is a product state.
    auto product = fes::normalized(fes::random_umps(1, 2, 5));
    CHECK(fes::half_line_entropy(product).S == doctest::Approx(0.0).epsilon(1e-12));

    auto st = fes::normalized(fes::random_umps(5, 2, 6));
    auto rec = fes::half_line_entropy(st);
    CHECK(rec.S >= 0.0);
    CHECK(rec.S <= std::log(5.0) + 1e-12);
    double sum = 0.0;
    for (double lam : rec.schmidt) sum += lam * lam;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rec.kind == fes::CutKind::HalfLine);

    // Gauge invariance of the Schmidt spectrum.
    auto mixed = fes::canonicalize(st, fes::Gauge::MixedCanonical);
    auto rec2 = fes::half_line_entropy(mixed);
    REQUIRE(rec2.schmidt.size() == rec.schmidt.size());
    for (std::size_t i = 0; i < rec.schmidt.size(); ++i)
        CHECK(rec.schmidt[i] == doctest::Approx(rec2.schmidt[i]).epsilon(1e-9));

    CHECK_THROWS_AS(fes::interval_entropy(st, 3, 4), fes::BondDimensionTooLarge);
}

TEST_CASE("the sampling grid is log-spaced deduplicated and bounded") {
    auto grid = fes::correlation_grid(25.0, 24, 40.0);
    REQUIRE(!grid.empty());
    CHECK(grid.front() == 1);
    CHECK(grid.back() <= 1000);
    CHECK(grid.back() >= 900);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);

    // About 24 points per decade over three decades.
    CHECK(grid.size() > 55);
    CHECK(grid.size() < 80);
}

TEST_CASE("observable extraction gathers every requested piece") {
    auto st = critical_state(4);
    fes::ObserveOptions opts;
    opts.ops = {"sigma", "eps", "mu", "psi"};
    opts.spectrum_K = 4;
    auto rec = fes::observe_state(st, opts);

    CHECK(rec.D == 4);
    CHECK(rec.mu2 > 1.0);
    CHECK(rec.ops.size() == 4);
    CHECK(rec.has_half_line);
    REQUIRE(rec.intervals.size() == 1);
    CHECK(rec.intervals[0].x == std::max<long>(1, std::lround(0.1 * rec.mu2)));
    CHECK(rec.spectrum.eigenvalues.size() >= 4);
    CHECK(std::isinf(rec.spectrum.lengths[0]));

    for (const char* label : {"sigma", "eps", "mu", "psi"}) {
        REQUIRE(rec.ops.count(label) == 1);
        const auto& op = rec.ops.at(label);
        CHECK(!op.series.x.empty());
        CHECK(op.series.has_interpolant);
        if (op.is_string) {
            CHECK(std::abs(op.string_eigenvalue) > 0.0);
        } else {
            CHECK(!op.couplings.empty());
        }
    }

    // Round trip through JSON preserves the numbers.
    const std::string text = fes::drecord_to_json(rec);
    auto back = fes::drecord_from_json(text, fes::InterpolantKind::Spline);
    CHECK(back.D == rec.D);
    CHECK(back.mu2 == rec.mu2);
    const auto& a = rec.ops.at("sigma").series;
    const auto& b = back.ops.at("sigma").series;
    REQUIRE(a.x.size() == b.x.size());
    for (std::size_t i = 0; i < a.x.size(); ++i) {
        CHECK(a.x[i] == b.x[i]);
        CHECK(a.G[i] == b.G[i]);
    }
    CHECK(back.half_line.S == rec.half_line.S);
}
