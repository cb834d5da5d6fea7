#include "fes/scaling_fits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fes/errors.hpp"

namespace fes {

namespace {

const DRecord& largest_record(const ScalingDataset& data) {
    if (data.records.empty()) throw InsufficientPoints("dataset has no records");
    return data.records.back();
}

const OperatorRecord& op_record(const DRecord& rec, const std::string& label) {
    auto it = rec.ops.find(label);
    if (it == rec.ops.end())
        throw ConfigError("dataset record D=" + std::to_string(rec.D) + " has no operator '" +
                          label + "'");
    return it->second;
}

} // namespace

std::string exponent_method_name(ExponentMethod method) {
    switch (method) {
        case ExponentMethod::Scan: return "scan";
        case ExponentMethod::S0Fallback1: return "s0_fallback_1";
        case ExponentMethod::InfiniteScale: return "infinite_scale";
    }
    return "unknown";
}

std::vector<double> scale_grid(double lo, double hi, int n) {
    if (lo <= 0.0 || hi <= lo || n < 2) throw ConfigError("scale_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> s(n);
    const double step = (std::log(hi) - std::log(lo)) / (n - 1);
    for (int i = 0; i < n; ++i) s[i] = std::exp(std::log(lo) + step * i);
    return s;
}

std::vector<ScanPoint> fes_exponent_curve(const ScalingDataset& data, const std::string& label,
                                          const std::vector<double>& s_grid) {
    if (data.records.size() < 4)
        throw InsufficientPoints("scaling fits need at least 4 bond dimensions, got " +
                                 std::to_string(data.records.size()));
    std::vector<ScanPoint> scan;
    scan.reserve(s_grid.size());
    for (const double s : s_grid) {
        ScanPoint point;
        point.s = s;
        std::vector<double> lx, lg;
        for (const DRecord& rec : data.records) {
            const CorrelatorSeries& series = op_record(rec, label).series;
            const double x = s * rec.mu2;
            if (!series.covers(x)) {
                point.skipped = true;
                point.skip_reason = "s*mu2 = " + std::to_string(x) +
                                    " outside the sampled window at D = " + std::to_string(rec.D);
                break;
            }
            lx.push_back(std::log(x));
            lg.push_back(series.log_abs_G(x));
        }
        if (!point.skipped) {
            point.fit = ols_fit(lx, lg);
            point.fit.s = s;
        }
        scan.push_back(std::move(point));
    }
    return scan;
}

double direct_slope(const CorrelatorSeries& series, double mu2, double s) {
    const double x = s * mu2;
    if (!series.covers(x))
        throw ScaleOutOfRange("direct slope: x = " + std::to_string(x) +
                              " outside the sampled window of '" + series.label + "'");
    return series.log_slope(x);
}

S0Result find_s0(const std::vector<ScanPoint>& scan, const CorrelatorSeries& largest_series,
                 double largest_mu2) {
    S0Result result;
    for (const ScanPoint& point : scan) {
        if (point.s >= 1.0 || point.skipped) continue;
        const double x = point.s * largest_mu2;
        if (!largest_series.covers(x)) continue;
        const double direct = largest_series.log_slope(x);
        // Small absolute floor so that exact agreement (zero-width bands on
        // synthetic data) still counts as an intersection.
        const double tol = point.fit.ci9973 + 1e-10 * std::max(1.0, std::abs(point.fit.slope));
        if (std::abs(direct - point.fit.slope) <= tol &&
            (!result.from_intersection || point.s > result.s0)) {
            result.s0 = point.s;
            result.from_intersection = true;
        }
    }
    if (!result.from_intersection) result.s0 = 1.0;
    return result;
}

FitResult infinite_scale_fit(const ScalingDataset& data, const std::string& label) {
    if (data.records.size() < 3)
        throw InsufficientPoints("dominant-coefficient fit needs at least 3 bond dimensions");
    const OperatorRecord& top = op_record(largest_record(data), label);

    int index = -1;  // coupling index into OperatorRecord::couplings
    if (!top.is_string) {
        const bool connected = top.series.connected;
        if (!connected && !top.couplings.empty() && std::abs(top.couplings[0]) > 1e-12) {
            index = 0;
        } else {
            for (std::size_t I = 1; I < top.couplings.size(); ++I) {
                if (std::abs(top.couplings[I]) > 1e-12) {
                    index = static_cast<int>(I);
                    break;
                }
            }
        }
        if (index < 0)
            throw NoCoupling("operator '" + label +
                             "' couples to no transfer eigenvector above 1e-12");
    }

    std::vector<double> lx, ly;
    for (const DRecord& rec : data.records) {
        const OperatorRecord& orec = op_record(rec, label);
        const double mag = top.is_string
                               ? std::abs(orec.string_coupling)
                               : (index < static_cast<int>(orec.couplings.size())
                                      ? std::abs(orec.couplings[index])
                                      : 0.0);
        if (mag <= 0.0) continue;
        lx.push_back(std::log(rec.mu2));
        ly.push_back(std::log(mag));
    }
    if (lx.size() < 3)
        throw NoCoupling("operator '" + label + "' has dominant coefficients at fewer than 3 D");
    FitResult fit = ols_fit(lx, ly);
    fit.s = std::numeric_limits<double>::infinity();
    return fit;
}

ExponentEstimate estimate_exponent(const ScalingDataset& data, const std::string& label,
                                   const std::vector<double>& s_grid) {
    ExponentEstimate est;
    est.label = label;
    est.scan = fes_exponent_curve(data, label, s_grid);

    const DRecord& top = largest_record(data);
    const S0Result s0 = find_s0(est.scan, op_record(top, label).series, top.mu2);
    est.s0 = s0.s0;
    est.s0_from_intersection = s0.from_intersection;

    bool found = false;
    for (const ScanPoint& point : est.scan) {
        if (point.skipped || point.s < est.s0) continue;
        if (!found || point.fit.ci95 < est.fit.ci95) {
            est.fit = point.fit;
            est.s_star = point.s;
            found = true;
        }
    }
    if (found) est.method = s0.from_intersection ? ExponentMethod::Scan : ExponentMethod::S0Fallback1;

    try {
        const FitResult inf_fit = infinite_scale_fit(data, label);
        if (!found || inf_fit.ci95 < est.fit.ci95) {
            est.fit = inf_fit;
            est.s_star = std::numeric_limits<double>::infinity();
            est.method = ExponentMethod::InfiniteScale;
            found = true;
        }
    } catch (const NoCoupling&) {
        // scan result stands on its own
    }
    if (!found)
        throw ScaleOutOfRange("no admissible scale for operator '" + label +
                              "': every grid point is skipped or below s0");

    est.two_delta = -est.fit.slope;
    est.ci95 = est.fit.ci95;
    est.ci9973 = est.fit.ci9973;
    return est;
}

} // namespace fes
