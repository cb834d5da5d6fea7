// Prints the frozen reference values used in the unit and acceptance tests,
// next to independent cross-checks (closed forms vs quadrature vs ring ED),
// so the frozen numbers can be regenerated and re-verified after any change
// to the oracle code. Not part of the ctest suite.
#include <cstdio>

#include "oracles.hpp"

int main() {
    std::printf("== closed forms vs quadrature ==\n");
    std::printf("e0(1,1)   quad % .15f   exact % .15f\n", oracle::energy_density(1.0, 1.0),
                oracle::critical_energy_density);
    std::printf("mz(1,1)   quad % .15f   exact % .15f\n",
                oracle::transverse_magnetization(1.0, 1.0),
                oracle::critical_transverse_magnetization);
    std::printf("e0(1,10)  quad % .15f\n", oracle::energy_density(1.0, 10.0));
    std::printf("e0(1,2)   quad % .15f\n", oracle::energy_density(1.0, 2.0));
    std::printf("e0(1,0.5) quad % .15f\n", oracle::energy_density(1.0, 0.5));

    std::printf("\n== ED ring n=12, h=10 (tiny correlation length) ==\n");
    {
        const auto g = oracle::ed_ground(12, 1.0, 10.0);
        std::printf("e/site ED % .15f  quad % .15f  diff %.2e\n", g.energy_per_site,
                    oracle::energy_density(1.0, 10.0),
                    g.energy_per_site - oracle::energy_density(1.0, 10.0));
        std::printf("<sz>   ED % .15f  quad % .15f\n", oracle::ed_sz(g),
                    oracle::transverse_magnetization(1.0, 10.0));
    }

    std::printf("\n== ED ring n=16, critical ==\n");
    const auto g = oracle::ed_ground(16, 1.0, 1.0);
    std::printf("e/site ED % .15f  exact % .15f  (finite size)\n", g.energy_per_site,
                oracle::critical_energy_density);
    std::printf("<sz>   ED % .15f  exact % .15f  (finite size)\n", oracle::ed_sz(g),
                oracle::critical_transverse_magnetization);
    std::printf("\n<sx sx>(x):   ED          closed form   rel.dev\n");
    for (int x = 1; x <= 6; ++x) {
        const double ed = oracle::ed_sigma_sigma(g, x);
        const double ex = oracle::critical_sigma_sigma(x);
        std::printf("  x=%d  % .9f  % .9f  %+.2e\n", x, ed, ex, ed / ex - 1.0);
    }

    std::printf("\n== eps-eps connected, both z signs (which one decays x^-2?) ==\n");
    std::printf(" x    zsign=-1        zsign=+1\n");
    double prev_m = 0, prev_p = 0;
    for (int x = 2; x <= 6; ++x) {
        const double cm = oracle::ed_eps_eps_connected(g, x, -1.0);
        const double cp = oracle::ed_eps_eps_connected(g, x, +1.0);
        std::printf("  %d  % .6e  % .6e", x, cm, cp);
        if (x > 2)
            std::printf("   local slopes: %+.3f  %+.3f",
                        std::log(std::abs(cm / prev_m)) / std::log(double(x) / (x - 1)),
                        std::log(std::abs(cp / prev_p)) / std::log(double(x) / (x - 1)));
        std::printf("\n");
        prev_m = cm;
        prev_p = cp;
    }
    std::printf("exact if x^-2: 4/pi^2 * [2/(4x^2-1) + 1/(2x-1)^2 + 1/(2x+1)^2]:\n");
    for (int x = 2; x <= 6; ++x) {
        const double v = (4.0 / (M_PI * M_PI)) *
                         (2.0 / (4.0 * x * x - 1.0) + 1.0 / ((2.0 * x - 1.0) * (2.0 * x - 1.0)) +
                          1.0 / ((2.0 * x + 1.0) * (2.0 * x + 1.0)));
        std::printf("  x=%d  % .6e\n", x, v);
    }

    std::printf("\n== string correlators (endpoint conventions) ==\n");
    std::printf(" x    s+..s+        s-..s-        s+..s-        s-..s+        (2/pi)x/(4x^2-1)\n");
    for (int x = 1; x <= 6; ++x) {
        std::printf("  %d  % .6e  % .6e  % .6e  % .6e  % .6e\n", x,
                    oracle::ed_string_pm(g, x, true, true),
                    oracle::ed_string_pm(g, x, false, false),
                    oracle::ed_string_pm(g, x, true, false),
                    oracle::ed_string_pm(g, x, false, true), oracle::critical_fermion_pair(x));
    }

    std::printf("\n== mu string vs sigma-sigma (lattice duality at the self-dual point) ==\n");
    std::printf(" x    <prod sz>     <sx sx>(x)    closed form sigma\n");
    for (int x = 1; x <= 6; ++x)
        std::printf("  %d  % .9f  % .9f  % .9f\n", x, oracle::ed_string_z(g, x),
                    oracle::ed_sigma_sigma(g, x), oracle::critical_sigma_sigma(x));

    return 0;
}
