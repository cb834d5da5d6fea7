#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

// Reference values for the transverse-field Ising chain
//
//   H = -J sum_i sx_i sx_{i+1} + h sum_i sz_i
//
// computed by routes independent of the library under test: closed forms,
// free-fermion quadrature, and exact diagonalization on a ring with a
// hand-rolled real-symmetric Lanczos. Nothing here touches fescore solvers.
namespace oracle {

inline constexpr double critical_energy_density = -1.2732395447351628;       // -4/pi
inline constexpr double critical_transverse_magnetization = -0.6366197723675814;  // -2/pi

// Free-fermion dispersion integrals (Gauss-Legendre, smooth integrand).
double energy_density(double J, double h);
double transverse_magnetization(double J, double h);  // d e0 / d h, negative for h > 0

// <sx_0 sx_x> at the self-dual point J = h: the classic closed-form product
//   rho(x) = (2/pi)^x prod_{k=1}^{x-1} (1 - 1/(4 k^2))^(k - x),
// evaluated in logs for stability.
double critical_sigma_sigma(long x);

// Fermion-pair string correlator with s+ on both endpoints:
//   (2/pi) x / (4 x^2 - 1).
double critical_fermion_pair(long x);

// ---------------------------------------------------------------------------
// Exact diagonalization on an n-site ring (sz computational basis, H real
// symmetric). Practical up to n = 18 or so.
struct RingGround {
    int n = 0;
    double J = 1.0, h = 1.0;
    double energy = 0.0;           // total ground energy
    double energy_per_site = 0.0;
    Eigen::VectorXd psi;           // 2^n amplitudes
};

RingGround ed_ground(int n, double J, double h);

double ed_sz(const RingGround& g);                      // <sz>, site average
double ed_sigma_sigma(const RingGround& g, int x);      // <sx_0 sx_x>
double ed_sz_sz(const RingGround& g, int x);            // <sz_0 sz_x>
// <eps(0) eps(x)> - <eps>^2 with eps(i) = sx_i sx_{i+1} + zsign * sz_i.
double ed_eps_eps_connected(const RingGround& g, int x, double zsign);
double ed_eps_expectation(const RingGround& g, double zsign);
// <sE_0 (prod_{j=1}^{x-1} sz_j) sE'_x> with sE = s+ or s- per flag.
double ed_string_pm(const RingGround& g, int x, bool left_plus, bool right_plus);
// <prod_{j=0}^{x-1} sz_j>
double ed_string_z(const RingGround& g, int x);

} // namespace oracle
