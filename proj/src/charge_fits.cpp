#include "fes/charge_fits.hpp"

#include <algorithm>
#include <cmath>

#include "fes/errors.hpp"

namespace fes {

namespace {

CentralChargeFit charge_from_slope(std::vector<double> lx, std::vector<double> S, double factor,
                                   const std::string& source) {
    CentralChargeFit out;
    out.source = source;
    out.fit = ols_fit(lx, S);
    out.c = factor * out.fit.slope;
    out.ci95 = factor * out.fit.ci95;
    out.ci9973 = factor * out.fit.ci9973;
    return out;
}

} // namespace

CentralChargeFit fit_central_charge_half_line(const ScalingDataset& data) {
    std::vector<double> lx, S;
    for (const DRecord& rec : data.records) {
        if (!rec.has_half_line) continue;
        lx.push_back(std::log(rec.mu2));
        S.push_back(rec.half_line.S);
    }
    if (lx.size() < 3) throw InsufficientPoints("half-line entropy present at fewer than 3 D");
    return charge_from_slope(std::move(lx), std::move(S), 6.0, "half_line");
}

CentralChargeFit fit_central_charge_interval(const ScalingDataset& data) {
    std::vector<double> lx, S;
    for (const DRecord& rec : data.records) {
        if (rec.intervals.empty()) continue;
        const double target = data.interval_s * rec.mu2;
        const EntropyRecord* best = &rec.intervals.front();
        for (const EntropyRecord& e : rec.intervals)
            if (std::abs(e.x - target) < std::abs(best->x - target)) best = &e;
        lx.push_back(std::log(rec.mu2));
        S.push_back(best->S);
    }
    if (lx.size() < 3) throw InsufficientPoints("interval entropy present at fewer than 3 D");
    return charge_from_slope(std::move(lx), std::move(S), 3.0, "interval");
}

double kappa_of_c(double c) {
    if (c <= 0.0) throw ConfigError("kappa_of_c: central charge must be positive");
    return 6.0 / (c * (std::sqrt(12.0 / c) + 1.0));
}

double invert_kappa(double kappa) {
    double lo = 0.05, hi = 10.0;
    const double k_lo = kappa_of_c(lo);  // kappa is decreasing in c
    const double k_hi = kappa_of_c(hi);
    if (kappa > k_lo || kappa < k_hi)
        throw InversionOutOfRange("kappa = " + std::to_string(kappa) + " outside [" +
                                  std::to_string(k_hi) + ", " + std::to_string(k_lo) +
                                  "], the image of c in [0.05, 10]");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (kappa_of_c(mid) > kappa)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

KappaFit fit_kappa(const ScalingDataset& data) {
    if (data.records.size() < 4)
        throw InsufficientPoints("kappa fit needs at least 4 bond dimensions");
    std::vector<double> lD, lmu, S;
    for (const DRecord& rec : data.records) {
        if (!rec.has_half_line) continue;
        lD.push_back(std::log(static_cast<double>(rec.D)));
        lmu.push_back(std::log(rec.mu2));
        S.push_back(rec.half_line.S);
    }
    if (lD.size() < 4) throw InsufficientPoints("kappa fit: half-line entropy missing at some D");

    KappaFit out;
    out.mu2_fit = ols_fit(lD, lmu);
    out.kappa = out.mu2_fit.slope;
    out.kappa_ci95 = out.mu2_fit.ci95;

    out.c_from_kappa = invert_kappa(out.kappa);
    const double dc = 1e-6 * out.c_from_kappa;
    const double dkdc =
        (kappa_of_c(out.c_from_kappa + dc) - kappa_of_c(out.c_from_kappa - dc)) / (2.0 * dc);
    out.c_from_kappa_ci95 = std::abs(out.kappa_ci95 / dkdc);

    out.entropy_fit = ols_fit(lD, S);
    out.c_free = 6.0 * out.entropy_fit.slope / out.kappa;
    const double rel_b = out.entropy_fit.ci95 / std::abs(out.entropy_fit.slope);
    const double rel_k = out.kappa_ci95 / std::abs(out.kappa);
    out.c_free_ci95 = std::abs(out.c_free) * std::sqrt(rel_b * rel_b + rel_k * rel_k);
    return out;
}

RatioDiagnostic eigenvalue_ratio_diagnostic(const ScalingDataset& data, int K) {
    if (data.records.size() < 2)
        throw InsufficientPoints("ratio diagnostic needs at least 2 bond dimensions");
    int available = K;
    for (const DRecord& rec : data.records)
        available = std::min(available, static_cast<int>(rec.spectrum.eigenvalues.size()));
    if (available < 2) throw InsufficientPoints("ratio diagnostic: fewer than 2 eigenvalues stored");

    RatioDiagnostic diag;
    for (const DRecord& rec : data.records) diag.dims.push_back(rec.D);

    for (int I = 2; I <= available; ++I) {
        RatioRow row;
        row.I = I;
        std::vector<double> lD, lmu;
        for (const DRecord& rec : data.records) {
            const double re2 = rec.spectrum.eigenvalues[1].real();
            const double reI = rec.spectrum.eigenvalues[I - 1].real();
            row.ratios.push_back(reI / re2);
            const double mu = rec.spectrum.lengths[I - 1];
            if (std::isfinite(mu) && mu > 0.0) {
                lD.push_back(std::log(static_cast<double>(rec.D)));
                lmu.push_back(std::log(mu));
            }
        }
        const std::size_t n = row.ratios.size();
        const double last = row.ratios[n - 1];
        const double prev = row.ratios[n - 2];
        row.drift = std::abs(last - prev) / std::abs(last);
        row.converged = row.drift < 0.02;
        if (lD.size() >= 3) {
            row.mu_fit = ols_fit(lD, lmu);
            row.has_mu_fit = true;
        }
        diag.rows.push_back(std::move(row));
    }
    return diag;
}

} // namespace fes
