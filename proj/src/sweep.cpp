#include "fes/sweep.hpp"

#include <cmath>
#include <limits>

#include "fes/errors.hpp"
#include "fes/rng.hpp"

namespace fes {

UniformMPS expand_bond_dimension(const UniformMPS& state, int D_new, double noise_amplitude,
                                 std::uint64_t seed) {
    if (D_new < state.D)
        throw InitDimensionMismatch("expand_bond_dimension: target D " + std::to_string(D_new) +
                                    " below current " + std::to_string(state.D));
    if (D_new == state.D) return state;
    Rng rng(seed);
    UniformMPS out;
    out.d = state.d;
    out.D = D_new;
    out.gauge = Gauge::Raw;
    out.A.resize(state.d);
    for (int s = 0; s < state.d; ++s) {
        Matrix a = rng.gaussian_matrix(D_new, D_new, noise_amplitude);
        a.topLeftCorner(state.D, state.D) = state.A[s];
        out.A[s] = std::move(a);
    }
    return normalized(out);
}

std::vector<SweepEntry> sweep_bond_dimensions(
    const SpinChainModel& model, const std::vector<int>& dims, const VumpsOptions& base,
    const std::function<void(const SweepEntry&)>& on_result) {
    if (dims.empty()) throw ConfigError("sweep_bond_dimensions: empty bond-dimension list");
    for (std::size_t i = 1; i < dims.size(); ++i)
        if (dims[i] <= dims[i - 1])
            throw ConfigError("sweep_bond_dimensions: bond dimensions must be strictly ascending");

    std::vector<SweepEntry> entries;
    const UniformMPS* previous = nullptr;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const int D = dims[i];
        SweepEntry entry;
        entry.D = D;
        try {
            UniformMPS init;
            const UniformMPS* init_ptr = nullptr;
            if (previous) {
                init = expand_bond_dimension(*previous, D, 1e-3,
                                             base.seed + 0x9e3779b9u * static_cast<std::uint64_t>(D));
                init_ptr = &init;
            }
            auto [state, report] = solve_ground_state(model, D, base, init_ptr);
            entry.state = std::move(state);
            entry.report = report;
        } catch (const Error& e) {
            entry.failed = true;
            entry.error = e.what();
        }
        entries.push_back(std::move(entry));
        if (!entries.back().failed) previous = &entries.back().state;
        if (on_result) on_result(entries.back());
    }
    return entries;
}

namespace {

// sigma-x polarized product state embedded at bond dimension D, plus noise.
UniformMPS biased_product_state(int D, std::uint64_t seed, double noise) {
    Rng rng(seed);
    UniformMPS psi;
    psi.d = 2;
    psi.D = D;
    psi.gauge = Gauge::Raw;
    psi.A.resize(2);
    const double amp = 1.0 / std::sqrt(2.0);
    for (int s = 0; s < 2; ++s) {
        Matrix a = rng.gaussian_matrix(D, D, noise);
        a(0, 0) += amp;
        psi.A[s] = std::move(a);
    }
    return normalized(psi);
}

}  // namespace

OrderSweepResult order_parameter_sweep(double J, const std::vector<double>& h_grid, int D,
                                       const VumpsOptions& base, double zero_tol) {
    if (h_grid.size() < 2) throw ConfigError("order_parameter_sweep: need at least two field values");
    for (std::size_t i = 1; i < h_grid.size(); ++i)
        if (h_grid[i] <= h_grid[i - 1])
            throw ConfigError("order_parameter_sweep: field grid must be strictly ascending");

    OrderSweepResult result;
    result.D = D;
    result.zero_tol = zero_tol;

    const Matrix sx = pauli_x();
    UniformMPS carry;
    bool have_carry = false;
    for (const double h : h_grid) {
        const SpinChainModel model = ising_model(J, h);
        const UniformMPS init = have_carry ? carry : biased_product_state(D, base.seed, 1e-2);
        auto [state, report] = solve_ground_state(model, D, base, &init);
        OrderPoint point;
        point.h = h;
        point.sigma_x = std::real(onsite_expectation_value(state, sx));
        point.report = report;
        result.points.push_back(point);
        carry = std::move(state);
        have_carry = true;
    }

    int last_positive = -1;
    for (std::size_t i = 0; i < result.points.size(); ++i)
        if (std::abs(result.points[i].sigma_x) > zero_tol) last_positive = static_cast<int>(i);
    if (last_positive >= 0 && last_positive + 1 < static_cast<int>(result.points.size()) &&
        std::abs(result.points[last_positive + 1].sigma_x) <= zero_tol) {
        result.h_star = 0.5 * (result.points[last_positive].h + result.points[last_positive + 1].h);
        result.transition_found = true;
    } else {
        result.h_star = std::numeric_limits<double>::quiet_NaN();
        result.transition_found = false;
    }
    return result;
}

}  // namespace fes
