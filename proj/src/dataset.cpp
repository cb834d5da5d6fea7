#include "fes/dataset.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "json.hpp"

#include "fes/errors.hpp"
#include "fes/insertions.hpp"
#include "fes/krylov.hpp"
#include "fes/spin_chain.hpp"

namespace fes {

namespace {

using nlohmann::json;

json cx_json(cxd z) { return json::array({z.real(), z.imag()}); }

cxd cx_parse(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

double finite_or_inf(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    return j.get<double>();
}

// Dominant eigenpair of the sigma-z dressed transfer operator, biorthonormal
// (l_z | r_z) = 1.
struct StringMode {
    cxd eigenvalue;
    Matrix right, left;
    bool coupled = true;
};

StringMode string_mode(const UniformMPS& state) {
    const int D = state.D;
    const Matrix sz = pauli_z();
    ArnoldiOptions opts;
    opts.k = 1;
    auto right_map = [&](const Vector& v) {
        return mat_to_vec(apply_op_transfer_right(state.A, sz, vec_to_mat(v, D, D)));
    };
    auto left_map = [&](const Vector& v) {
        return mat_to_vec(apply_op_transfer_left(state.A, sz, vec_to_mat(v, D, D)));
    };
    const auto right = arnoldi_eigs(static_cast<Eigen::Index>(D) * D, right_map, opts);
    const auto left = arnoldi_eigs(static_cast<Eigen::Index>(D) * D, left_map, opts);

    StringMode mode;
    mode.eigenvalue = right.at(0).value;
    mode.right = vec_to_mat(right.at(0).vector, D, D);
    mode.left = vec_to_mat(left.at(0).vector, D, D);
    const cxd g = frob_inner(mode.left, mode.right);
    if (std::abs(g) < 1e-14) {
        mode.coupled = false;
        return mode;
    }
    mode.left /= std::conj(g);
    return mode;
}

OperatorRecord make_operator_record(const UniformMPS& state, const OperatorInsertion& op,
                                    const TransferSpectrum& spec, const ObserveOptions& opts,
                                    double mu2) {
    OperatorRecord rec;
    const auto xs = correlation_grid(mu2, opts.points_per_decade, opts.x_max_factor, op.footprint);
    rec.series = two_point_series(state, op, xs, opts.interp);
    rec.is_string = op.is_string();
    const int D = state.D;

    if (op.is_string()) {
        const StringMode mode = string_mode(state);
        rec.string_eigenvalue = mode.eigenvalue;
        if (mode.coupled) {
            const Matrix sz = pauli_z();
            const Matrix left_close = op.kind == InsertionKind::StringZ ? sz : op.endpoint;
            const Matrix right_end = op.kind == InsertionKind::StringZ ? identity2() : op.endpoint;
            const cxd a = frob_inner(state.l, apply_op_transfer_right(state.A, left_close, mode.right));
            const cxd b = frob_inner(mode.left, apply_op_transfer_right(state.A, right_end, state.r));
            rec.string_coupling = a * b;
        }
        return rec;
    }

    const Matrix applied = apply_block_transfer_right(state.A, op.block, op.footprint, state.r);
    const Matrix block_dag = op.block.adjoint();
    for (int I = 0; I < spec.count(); ++I) {
        const Matrix r_I = vec_to_mat(spec.right_vectors[I], D, D);
        const Matrix l_I = vec_to_mat(spec.left_vectors[I], D, D);
        const cxd a = frob_inner(state.l,
                                 apply_block_transfer_right(state.A, block_dag, op.footprint, r_I));
        const cxd b = frob_inner(l_I, applied);
        rec.couplings.push_back(a * b);
    }
    return rec;
}

json entropy_json(const EntropyRecord& rec) {
    json j;
    j["D"] = rec.D;
    j["kind"] = cut_kind_name(rec.kind);
    j["x"] = rec.x;
    j["S"] = rec.S;
    j["schmidt"] = rec.schmidt;
    return j;
}

EntropyRecord entropy_parse(const json& j) {
    EntropyRecord rec;
    rec.D = j.at("D").get<int>();
    rec.kind = j.at("kind").get<std::string>() == "half_line" ? CutKind::HalfLine : CutKind::Interval;
    rec.x = j.at("x").get<long>();
    rec.S = j.at("S").get<double>();
    rec.schmidt = j.at("schmidt").get<std::vector<double>>();
    return rec;
}

} // namespace

DRecord observe_state(const UniformMPS& state, const ObserveOptions& opts) {
    DRecord rec;
    rec.D = state.D;
    const TransferSpectrum spec = transfer_spectrum(state, opts.spectrum_K);
    rec.mu2 = correlation_length(spec);
    rec.spectrum.eigenvalues = spec.eigenvalues;
    rec.spectrum.lengths = spec.lengths;

    for (const std::string& label : opts.ops) {
        OperatorInsertion op = named_insertion(label);
        if (label == "sigma" && opts.sigma_connected) op.connected = true;
        rec.ops[label] = make_operator_record(state, op, spec, opts, rec.mu2);
    }

    if (opts.half_line) {
        rec.half_line = half_line_entropy(state);
        rec.has_half_line = true;
    }
    for (const double s : opts.interval_scales) {
        const long x = std::max<long>(1, std::lround(s * rec.mu2));
        rec.intervals.push_back(interval_entropy(state, x, opts.interval_max_bond));
    }
    return rec;
}

std::string drecord_to_json(const DRecord& rec) {
    json j;
    j["format_version"] = 1;
    j["D"] = rec.D;
    j["mu2"] = rec.mu2;

    json spec;
    spec["eigenvalues"] = json::array();
    for (cxd e : rec.spectrum.eigenvalues) spec["eigenvalues"].push_back(cx_json(e));
    spec["lengths"] = json::array();
    for (double m : rec.spectrum.lengths) spec["lengths"].push_back(finite_or_null(m));
    j["spectrum"] = spec;

    json ops = json::object();
    for (const auto& [label, orec] : rec.ops) {
        json o;
        json s;
        s["label"] = orec.series.label;
        s["D"] = orec.series.D;
        s["connected"] = orec.series.connected;
        s["one_point"] = cx_json(orec.series.one_point);
        s["x"] = orec.series.x;
        s["G"] = json::array();
        for (cxd g : orec.series.G) s["G"].push_back(cx_json(g));
        o["series"] = s;
        o["couplings"] = json::array();
        for (cxd c : orec.couplings) o["couplings"].push_back(cx_json(c));
        o["is_string"] = orec.is_string;
        o["string_coupling"] = cx_json(orec.string_coupling);
        o["string_eigenvalue"] = cx_json(orec.string_eigenvalue);
        ops[label] = o;
    }
    j["ops"] = ops;

    if (rec.has_half_line) j["half_line"] = entropy_json(rec.half_line);
    j["intervals"] = json::array();
    for (const EntropyRecord& e : rec.intervals) j["intervals"].push_back(entropy_json(e));
    return j.dump(1);
}

DRecord drecord_from_json(const std::string& text, InterpolantKind interp) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("observable record parse failure: ") + e.what());
    }
    try {
        DRecord rec;
        rec.D = j.at("D").get<int>();
        rec.mu2 = j.at("mu2").get<double>();
        for (const json& e : j.at("spectrum").at("eigenvalues"))
            rec.spectrum.eigenvalues.push_back(cx_parse(e));
        for (const json& m : j.at("spectrum").at("lengths"))
            rec.spectrum.lengths.push_back(finite_or_inf(m));

        for (const auto& [label, o] : j.at("ops").items()) {
            OperatorRecord orec;
            const json& s = o.at("series");
            orec.series.label = s.at("label").get<std::string>();
            orec.series.D = s.at("D").get<int>();
            orec.series.connected = s.at("connected").get<bool>();
            orec.series.one_point = cx_parse(s.at("one_point"));
            orec.series.x = s.at("x").get<std::vector<double>>();
            for (const json& g : s.at("G")) orec.series.G.push_back(cx_parse(g));
            orec.series.interpolant_kind = interp;
            build_interpolant(orec.series);
            for (const json& c : o.at("couplings")) orec.couplings.push_back(cx_parse(c));
            orec.is_string = o.at("is_string").get<bool>();
            orec.string_coupling = cx_parse(o.at("string_coupling"));
            orec.string_eigenvalue = cx_parse(o.at("string_eigenvalue"));
            rec.ops[label] = std::move(orec);
        }
        if (j.contains("half_line")) {
            rec.half_line = entropy_parse(j.at("half_line"));
            rec.has_half_line = true;
        }
        for (const json& e : j.at("intervals")) rec.intervals.push_back(entropy_parse(e));
        return rec;
    } catch (const json::exception& e) {
        throw IoError(std::string("observable record is missing fields: ") + e.what());
    }
}

void save_drecord(const DRecord& rec, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out << drecord_to_json(rec);
        if (!out) throw IoError("short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename " + tmp + " -> " + path + " failed: " + ec.message());
}

DRecord load_drecord(const std::string& path, InterpolantKind interp) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return drecord_from_json(text, interp);
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

} // namespace fes
