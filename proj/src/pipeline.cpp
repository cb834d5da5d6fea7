#include "fes/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "fes/charge_fits.hpp"
#include "fes/csv.hpp"
#include "fes/errors.hpp"
#include "fes/hash.hpp"
#include "fes/krylov.hpp"
#include "fes/scaling_fits.hpp"
#include "fes/state_io.hpp"
#include "fes/sweep.hpp"

namespace fes {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

// Manifest entries are keyed by path relative to the run directory.
std::string rel_key(const fs::path& run_dir, const fs::path& target) {
    const fs::path rel = fs::absolute(target).lexically_normal().lexically_relative(
        fs::absolute(run_dir).lexically_normal());
    const std::string s = rel.generic_string();
    return s.empty() || s == "." ? target.filename().generic_string() : s;
}

// Stage input signatures; hashing these (plus the code version) keys the cache.
std::string solve_signature(const RunConfig& cfg) {
    std::ostringstream sig;
    sig << code_version() << "|solve|" << cfg.model << '|' << fmt17(cfg.J) << '|' << fmt17(cfg.h)
        << "|dims";
    for (int D : cfg.dims) sig << ',' << D;
    sig << '|' << fmt17(cfg.tol) << '|' << cfg.max_iter << '|' << cfg.seed;
    return sig.str();
}

std::string observe_signature(const RunConfig& cfg, const std::vector<fs::path>& states) {
    std::ostringstream sig;
    sig << code_version() << "|observe|ops";
    for (const auto& op : cfg.ops) sig << ',' << op;
    sig << "|entropy";
    for (const auto& e : cfg.entropy) sig << ',' << e;
    sig << '|' << cfg.spectrum_k << '|' << cfg.points_per_decade << '|' << fmt17(cfg.x_max_factor)
        << '|' << cfg.interpolant << '|' << cfg.sigma_connected << '|' << cfg.interval_max_bond;
    for (const auto& p : states) sig << '|' << file_hash_hex(p.string());
    return sig.str();
}

std::string analyze_signature(const RunConfig& cfg, const std::vector<fs::path>& obs) {
    std::ostringstream sig;
    sig << code_version() << "|analyze|" << fmt17(cfg.s_lo) << '|' << fmt17(cfg.s_hi) << '|'
        << cfg.s_points << "|intervals";
    for (double s : cfg.interval_scales()) sig << ',' << fmt17(s);
    sig << '|' << cfg.interpolant << "|ops";
    for (const auto& op : cfg.ops) sig << ',' << op;
    for (const auto& p : obs) sig << '|' << file_hash_hex(p.string());
    return sig.str();
}

bool outputs_intact(const RunManifest& manifest, const fs::path& run_dir,
                    const std::vector<std::string>& prefixes) {
    bool any = false;
    for (const FileEntry& f : manifest.files) {
        bool matched = false;
        for (const std::string& prefix : prefixes)
            if (f.path.rfind(prefix, 0) == 0) matched = true;
        if (!matched) continue;
        any = true;
        const fs::path full = run_dir / f.path;
        if (!fs::exists(full)) return false;
        try {
            if (file_hash_hex(full.string()) != f.hash) return false;
        } catch (const IoError&) {
            return false;
        }
    }
    return any;
}

bool stage_cached(const RunManifest& manifest, const std::string& stage, const std::string& key,
                  const fs::path& run_dir, const std::vector<std::string>& prefixes) {
    const StageStatus* status = manifest.find_stage(stage);
    if (!status) return false;
    if (status->key != key) return false;
    // A partial stage is never cached: rerunning is the retry path.
    if (status->status != "done" && status->status != "cached") return false;
    return outputs_intact(manifest, run_dir, prefixes);
}

void mark_cached(RunManifest& manifest, const std::string& stage) {
    StageStatus status = *manifest.find_stage(stage);
    status.status = "cached";
    status.seconds = 0.0;
    manifest.upsert_stage(status);
}

void drop_files_with_prefix(RunManifest& manifest, const std::string& prefix) {
    manifest.files.erase(std::remove_if(manifest.files.begin(), manifest.files.end(),
                                        [&](const FileEntry& f) {
                                            return f.path.rfind(prefix, 0) == 0;
                                        }),
                         manifest.files.end());
}

void clean_dir_of(const fs::path& dir, const std::string& stem_prefix, const std::string& ext) {
    if (!fs::exists(dir)) return;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.rfind(stem_prefix, 0) == 0 && name.size() >= ext.size() &&
            name.compare(name.size() - ext.size(), ext.size(), ext) == 0)
            fs::remove(entry.path());
    }
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& stem_prefix,
                                   const std::string& ext) {
    std::vector<fs::path> out;
    if (!fs::exists(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.rfind(stem_prefix, 0) == 0 && name.size() >= ext.size() &&
            name.compare(name.size() - ext.size(), ext.size(), ext) == 0)
            out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

json fit_json(const FitResult& fit) {
    json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["ci95"] = fit.ci95;
    j["ci9973"] = fit.ci9973;
    j["n_points"] = fit.n_points;
    j["r2"] = fit.r2;
    j["max_abs_resid"] = fit.max_abs_resid;
    j["s"] = finite_or_null(fit.s);
    return j;
}

void write_text_atomic(const fs::path& path, const std::string& text) {
    const std::string tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out << text;
        if (!out) throw IoError("short write to " + tmp);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("rename " + tmp + " -> " + path.string() + " failed: " + ec.message());
}

} // namespace

RunPaths RunPaths::defaults(const std::string& run_dir) {
    RunPaths paths;
    paths.run_dir = run_dir;
    paths.states_dir = (fs::path(run_dir) / "states").string();
    paths.obs_dir = (fs::path(run_dir) / "obs").string();
    paths.report_path = (fs::path(run_dir) / "report.json").string();
    paths.csv_dir = (fs::path(run_dir) / "report_csv").string();
    return paths;
}

std::string state_file_name(int D) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "state_D%03d.json", D);
    return buf;
}

std::string obs_file_name(int D) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "obs_D%03d.json", D);
    return buf;
}

StageOutcome stage_solve(const RunConfig& cfg, const RunPaths& paths, RunManifest& manifest) {
    StageOutcome out;
    const fs::path run_dir = paths.run_dir;
    const fs::path states_dir = paths.states_dir;
    const std::string states_prefix = rel_key(run_dir, states_dir) + "/";
    const std::string key = fnv1a64_hex(solve_signature(cfg));
    if (stage_cached(manifest, "solve", key, run_dir, {states_prefix})) {
        mark_cached(manifest, "solve");
        return out;
    }

    Timer timer;
    out.ran = true;
    fs::create_directories(states_dir);
    clean_dir_of(states_dir, "state_D", ".json");
    drop_files_with_prefix(manifest, states_prefix);

    const SpinChainModel model = make_model(cfg.model, {{"J", cfg.J}, {"h", cfg.h}});
    int failures = 0;
    std::string detail;
    const auto on_result = [&](const SweepEntry& entry) {
        if (entry.failed) {
            ++failures;
            if (!detail.empty()) detail += "; ";
            detail += "D=" + std::to_string(entry.D) + ": " + entry.error;
            return;
        }
        const std::string rel = states_prefix + state_file_name(entry.D);
        save_state((run_dir / rel).string(), entry.state, model, entry.report);
        manifest.record_file(run_dir.string(), rel);
    };
    try {
        sweep_bond_dimensions(model, cfg.dims, cfg.vumps_options(), on_result);
    } catch (const Error& e) {
        out.failed = true;
        out.detail = e.what();
        manifest.upsert_stage({"solve", "failed", key, out.detail, timer.seconds()});
        return out;
    }

    if (failures == static_cast<int>(cfg.dims.size())) {
        out.failed = true;
        out.detail = detail;
        manifest.upsert_stage({"solve", "failed", key, detail, timer.seconds()});
        return out;
    }
    out.partial = failures > 0;
    out.detail = detail;
    manifest.upsert_stage(
        {"solve", out.partial ? "partial" : "done", key, detail, timer.seconds()});
    return out;
}

StageOutcome stage_observe(const RunConfig& cfg, const RunPaths& paths, RunManifest& manifest) {
    StageOutcome out;
    const fs::path run_dir = paths.run_dir;
    const fs::path obs_dir = paths.obs_dir;
    const std::string obs_prefix = rel_key(run_dir, obs_dir) + "/";
    const std::vector<fs::path> states = sorted_files(paths.states_dir, "state_D", ".json");
    if (states.empty()) {
        out.failed = true;
        out.detail = "no state files under " + paths.states_dir + "; run solve first";
        manifest.upsert_stage({"observe", "failed", "", out.detail, 0.0});
        return out;
    }
    const std::string key = fnv1a64_hex(observe_signature(cfg, states));
    if (stage_cached(manifest, "observe", key, run_dir, {obs_prefix})) {
        mark_cached(manifest, "observe");
        return out;
    }

    Timer timer;
    out.ran = true;
    fs::create_directories(obs_dir);
    clean_dir_of(obs_dir, "obs_D", ".json");
    clean_dir_of(obs_dir, "corr_", ".csv");
    clean_dir_of(obs_dir, "entropy", ".csv");
    clean_dir_of(obs_dir, "schmidt", ".csv");
    drop_files_with_prefix(manifest, obs_prefix);

    const ObserveOptions opts = cfg.observe_options();
    int failures = 0;
    std::string detail;
    std::vector<std::vector<std::string>> entropy_rows, schmidt_rows;

    for (const fs::path& path : states) {
        try {
            const LoadedState loaded = load_state(path.string());
            const DRecord rec = observe_state(loaded.state, opts);

            const std::string rel = obs_prefix + obs_file_name(rec.D);
            save_drecord(rec, (run_dir / rel).string());
            manifest.record_file(run_dir.string(), rel);

            for (const auto& [label, orec] : rec.ops) {
                std::vector<std::vector<std::string>> rows;
                const double subtraction =
                    orec.series.connected ? std::norm(orec.series.one_point) : 0.0;
                for (std::size_t i = 0; i < orec.series.x.size(); ++i)
                    rows.push_back({csv_num(orec.series.x[i]), csv_num(orec.series.G[i].real()),
                                    csv_num(orec.series.G[i].imag()), csv_num(subtraction)});
                char buf[64];
                std::snprintf(buf, sizeof(buf), "corr_%s_D%03d.csv", label.c_str(), rec.D);
                const std::string csv_rel = obs_prefix + buf;
                write_csv((run_dir / csv_rel).string(),
                          {"x", "reG", "imG", "connected_subtraction"}, rows);
                manifest.record_file(run_dir.string(), csv_rel);
            }

            const auto entropy_row = [&](const EntropyRecord& e) {
                entropy_rows.push_back({std::to_string(e.D), cut_kind_name(e.kind),
                                        std::to_string(e.x), csv_num(e.S)});
                for (std::size_t i = 0; i < e.schmidt.size(); ++i)
                    schmidt_rows.push_back({std::to_string(e.D), cut_kind_name(e.kind),
                                            std::to_string(e.x), std::to_string(i),
                                            csv_num(e.schmidt[i])});
            };
            if (rec.has_half_line) entropy_row(rec.half_line);
            for (const EntropyRecord& e : rec.intervals) entropy_row(e);
        } catch (const Error& e) {
            ++failures;
            if (!detail.empty()) detail += "; ";
            detail += path.filename().string() + ": " + e.what();
        }
    }

    if (failures == static_cast<int>(states.size())) {
        out.failed = true;
        out.detail = detail;
        manifest.upsert_stage({"observe", "failed", key, detail, timer.seconds()});
        return out;
    }
    write_csv((obs_dir / "entropy.csv").string(), {"D", "kind", "x", "S"}, entropy_rows);
    manifest.record_file(run_dir.string(), obs_prefix + "entropy.csv");
    write_csv((obs_dir / "schmidt.csv").string(), {"D", "kind", "x", "index", "lambda"},
              schmidt_rows);
    manifest.record_file(run_dir.string(), obs_prefix + "schmidt.csv");

    out.partial = failures > 0;
    out.detail = detail;
    manifest.upsert_stage(
        {"observe", out.partial ? "partial" : "done", key, detail, timer.seconds()});
    return out;
}

StageOutcome stage_analyze(const RunConfig& cfg, const RunPaths& paths, RunManifest& manifest) {
    StageOutcome out;
    const fs::path run_dir = paths.run_dir;
    const fs::path csv_dir = paths.csv_dir;
    const std::string report_rel = rel_key(run_dir, paths.report_path);
    const std::string csv_prefix = rel_key(run_dir, csv_dir) + "/";
    const std::vector<fs::path> obs = sorted_files(paths.obs_dir, "obs_D", ".json");
    if (obs.size() < 4) {
        out.failed = true;
        out.detail = "found " + std::to_string(obs.size()) + " observable records under " +
                     paths.obs_dir + "; the scaling analysis needs at least 4";
        manifest.upsert_stage({"analyze", "failed", "", out.detail, 0.0});
        return out;
    }
    const std::string key = fnv1a64_hex(analyze_signature(cfg, obs));
    if (stage_cached(manifest, "analyze", key, run_dir, {report_rel, csv_prefix})) {
        mark_cached(manifest, "analyze");
        return out;
    }

    Timer timer;
    out.ran = true;
    fs::create_directories(csv_dir);
    clean_dir_of(csv_dir, "", ".csv");
    drop_files_with_prefix(manifest, csv_prefix);
    drop_files_with_prefix(manifest, report_rel);

    const InterpolantKind interp =
        cfg.interpolant == "linear" ? InterpolantKind::Linear : InterpolantKind::Spline;
    ScalingDataset data;
    data.model = cfg.model;
    data.J = cfg.J;
    data.h = cfg.h;
    const std::vector<double> scales = cfg.interval_scales();
    data.interval_s = scales.empty() ? 0.1 : scales.front();
    for (const fs::path& path : obs) data.records.push_back(load_drecord(path.string(), interp));
    std::sort(data.records.begin(), data.records.end(),
              [](const DRecord& a, const DRecord& b) { return a.D < b.D; });

    const std::vector<double> s_grid = scale_grid(cfg.s_lo, cfg.s_hi, cfg.s_points);
    int failures = 0;
    std::string detail;
    json report;
    report["format_version"] = 1;
    report["code"] = code_version();
    report["model"] = {{"name", cfg.model}, {"J", cfg.J}, {"h", cfg.h}};
    report["s_grid"] = {{"lo", cfg.s_lo}, {"hi", cfg.s_hi}, {"points", cfg.s_points}};
    report["interval_scale"] = data.interval_s;
    report["footnotes"] = json::array(
        {"The interval entropy is evaluated at the single scale s = 0.1 by convention; this "
         "choice is not validated against short-distance cutoff effects here.",
         "Half-line entropy fits use S = (c/6) log mu2 + k; interval fits use S = (c/3) log mu2 "
         "+ k at fixed s."});

    json dims = json::array();
    json mu2s = json::array();
    for (const DRecord& rec : data.records) {
        dims.push_back(rec.D);
        mu2s.push_back({{"D", rec.D}, {"mu2", rec.mu2}});
    }
    report["dims"] = dims;
    report["mu2"] = mu2s;

    json inputs = json::array();
    for (const fs::path& path : obs)
        inputs.push_back({{"path", rel_key(run_dir, path)},
                          {"hash", file_hash_hex(path.string())}});
    report["inputs"] = inputs;

    std::vector<std::string> csv_files;

    json exponents = json::object();
    for (const std::string& label : cfg.ops) {
        try {
            const ExponentEstimate est = estimate_exponent(data, label, s_grid);
            json je;
            je["two_delta"] = est.two_delta;
            je["ci95"] = est.ci95;
            je["ci9973"] = est.ci9973;
            je["s_star"] = finite_or_null(est.s_star);
            je["s0"] = est.s0;
            je["s0_from_intersection"] = est.s0_from_intersection;
            je["method"] = exponent_method_name(est.method);
            je["fit"] = fit_json(est.fit);
            exponents[label] = je;

            std::vector<std::vector<std::string>> rows;
            for (const ScanPoint& p : est.scan) {
                if (p.skipped) continue;
                rows.push_back({csv_num(p.s), csv_num(p.fit.slope), csv_num(p.fit.ci95),
                                csv_num(p.fit.ci9973)});
            }
            const std::string rel = csv_prefix + "exponent_curve_" + label + ".csv";
            write_csv((run_dir / rel).string(), {"s", "slope", "ci95", "ci9973"}, rows);
            csv_files.push_back(rel);
        } catch (const Error& e) {
            ++failures;
            if (!detail.empty()) detail += "; ";
            detail += label + ": " + e.what();
            exponents[label] = {{"error", e.what()}};
        }
    }
    report["exponents"] = exponents;

    json charges = json::object();
    std::vector<std::vector<std::string>> charge_rows;
    const auto push_charge = [&](const char* name,
                                 CentralChargeFit (*fitter)(const ScalingDataset&)) {
        try {
            const CentralChargeFit fit = fitter(data);
            json jc;
            jc["c"] = fit.c;
            jc["ci95"] = fit.ci95;
            jc["ci9973"] = fit.ci9973;
            jc["fit"] = fit_json(fit.fit);
            charges[name] = jc;
            charge_rows.push_back({name, csv_num(fit.c), csv_num(fit.ci95), csv_num(fit.ci9973),
                                   csv_num(fit.fit.slope), csv_num(fit.fit.r2),
                                   std::to_string(fit.fit.n_points)});
        } catch (const Error& e) {
            ++failures;
            if (!detail.empty()) detail += "; ";
            detail += std::string(name) + ": " + e.what();
            charges[name] = {{"error", e.what()}};
        }
    };
    push_charge("half_line", fit_central_charge_half_line);
    push_charge("interval", fit_central_charge_interval);
    report["central_charge"] = charges;

    try {
        const KappaFit kappa = fit_kappa(data);
        json jk;
        jk["kappa"] = kappa.kappa;
        jk["kappa_ci95"] = kappa.kappa_ci95;
        jk["c_from_kappa"] = kappa.c_from_kappa;
        jk["c_from_kappa_ci95"] = kappa.c_from_kappa_ci95;
        jk["c_free"] = kappa.c_free;
        jk["c_free_ci95"] = kappa.c_free_ci95;
        jk["mu2_fit"] = fit_json(kappa.mu2_fit);
        jk["entropy_fit"] = fit_json(kappa.entropy_fit);
        report["kappa"] = jk;
        write_csv((csv_dir / "kappa.csv").string(),
                  {"kappa", "kappa_ci95", "c_from_kappa", "c_from_kappa_ci95", "c_free",
                   "c_free_ci95"},
                  {{csv_num(kappa.kappa), csv_num(kappa.kappa_ci95), csv_num(kappa.c_from_kappa),
                    csv_num(kappa.c_from_kappa_ci95), csv_num(kappa.c_free),
                    csv_num(kappa.c_free_ci95)}});
        csv_files.push_back(csv_prefix + "kappa.csv");
    } catch (const Error& e) {
        ++failures;
        if (!detail.empty()) detail += "; ";
        detail += std::string("kappa: ") + e.what();
        report["kappa"] = {{"error", e.what()}};
    }

    try {
        const RatioDiagnostic diag = eigenvalue_ratio_diagnostic(data, cfg.spectrum_k);
        json jd;
        jd["dims"] = diag.dims;
        jd["rows"] = json::array();
        std::vector<std::vector<std::string>> rows;
        for (const RatioRow& row : diag.rows) {
            json jr;
            jr["I"] = row.I;
            jr["ratios"] = row.ratios;
            jr["drift"] = row.drift;
            jr["converged"] = row.converged;
            if (row.has_mu_fit) jr["mu_fit"] = fit_json(row.mu_fit);
            jd["rows"].push_back(jr);
            for (std::size_t k = 0; k < diag.dims.size(); ++k)
                rows.push_back({std::to_string(diag.dims[k]), std::to_string(row.I),
                                csv_num(row.ratios[k])});
        }
        report["ratios"] = jd;
        write_csv((csv_dir / "ratios.csv").string(), {"D", "I", "ratio"}, rows);
        csv_files.push_back(csv_prefix + "ratios.csv");
    } catch (const Error& e) {
        ++failures;
        if (!detail.empty()) detail += "; ";
        detail += std::string("ratios: ") + e.what();
        report["ratios"] = {{"error", e.what()}};
    }

    if (!charge_rows.empty()) {
        write_csv((csv_dir / "central_charge.csv").string(),
                  {"source", "c", "ci95", "ci9973", "slope", "r2", "n_points"}, charge_rows);
        csv_files.push_back(csv_prefix + "central_charge.csv");
    }

    std::sort(csv_files.begin(), csv_files.end());
    report["csv_files"] = csv_files;

    write_text_atomic(paths.report_path, report.dump(1));
    manifest.record_file(run_dir.string(), report_rel);
    for (const std::string& rel : csv_files) manifest.record_file(run_dir.string(), rel);

    out.partial = failures > 0;
    out.detail = detail;
    manifest.upsert_stage(
        {"analyze", out.partial ? "partial" : "done", key, detail, timer.seconds()});
    return out;
}

namespace {

int outcome_code(const StageOutcome& outcome) {
    if (outcome.failed) return 1;
    return outcome.partial ? 2 : 0;
}

int run_stage(const RunConfig& cfg, const RunPaths& paths,
              StageOutcome (*stage)(const RunConfig&, const RunPaths&, RunManifest&)) {
    cfg.validate();
    fs::create_directories(paths.run_dir);
    RunLock lock(paths.run_dir);
    RunManifest manifest = load_manifest(paths.run_dir);
    manifest.code = code_version();
    manifest.config_toml = cfg.canonical_toml();
    const StageOutcome outcome = stage(cfg, paths, manifest);
    save_manifest(manifest, paths.run_dir);
    if (!outcome.detail.empty()) std::fprintf(stderr, "%s\n", outcome.detail.c_str());
    return outcome_code(outcome);
}

} // namespace

int run_solve(const RunConfig& cfg, const RunPaths& paths) {
    return run_stage(cfg, paths, stage_solve);
}
int run_observe(const RunConfig& cfg, const RunPaths& paths) {
    return run_stage(cfg, paths, stage_observe);
}
int run_analyze(const RunConfig& cfg, const RunPaths& paths) {
    return run_stage(cfg, paths, stage_analyze);
}

int run_pipeline(const RunConfig& cfg, const RunPaths& paths) {
    cfg.validate();
    fs::create_directories(paths.run_dir);
    RunLock lock(paths.run_dir);
    RunManifest manifest = load_manifest(paths.run_dir);
    manifest.code = code_version();
    manifest.config_toml = cfg.canonical_toml();

    int code = 0;
    const StageOutcome solve = stage_solve(cfg, paths, manifest);
    code = std::max(code, outcome_code(solve));
    if (!solve.detail.empty()) std::fprintf(stderr, "solve: %s\n", solve.detail.c_str());
    if (!solve.failed) {
        const StageOutcome observe = stage_observe(cfg, paths, manifest);
        code = std::max(code, outcome_code(observe));
        if (!observe.detail.empty()) std::fprintf(stderr, "observe: %s\n", observe.detail.c_str());
        if (!observe.failed) {
            const StageOutcome analyze = stage_analyze(cfg, paths, manifest);
            code = std::max(code, outcome_code(analyze));
            if (!analyze.detail.empty())
                std::fprintf(stderr, "analyze: %s\n", analyze.detail.c_str());
        } else {
            code = 1;
        }
    } else {
        code = 1;
    }
    save_manifest(manifest, paths.run_dir);
    return code;
}

int run_solve(const RunConfig& cfg) { return run_solve(cfg, RunPaths::defaults(cfg.out_dir)); }
int run_observe(const RunConfig& cfg) { return run_observe(cfg, RunPaths::defaults(cfg.out_dir)); }
int run_analyze(const RunConfig& cfg) { return run_analyze(cfg, RunPaths::defaults(cfg.out_dir)); }
int run_pipeline(const RunConfig& cfg) {
    return run_pipeline(cfg, RunPaths::defaults(cfg.out_dir));
}

std::vector<ValidationIssue> validate_states(const std::string& dir) {
    std::vector<ValidationIssue> issues;
    fs::path base = dir;
    if (fs::exists(fs::path(dir) / "states")) base = fs::path(dir) / "states";
    const std::vector<fs::path> files = sorted_files(base, "state_", ".json");
    if (files.empty()) {
        issues.push_back({base.string(), "no state files found"});
        return issues;
    }
    for (const fs::path& path : files) {
        LoadedState loaded;
        try {
            loaded = state_from_json(read_file(path), /*normalize=*/false);
        } catch (const std::exception& e) {
            issues.push_back({path.string(), e.what()});
            continue;
        }

        try {
            // The stored tensor itself must satisfy e1 = 1; the loader would
            // silently repair a rescaled or perturbed tensor otherwise.
            ArnoldiOptions aopts;
            aopts.k = 1;
            const UniformMPS& rawst = loaded.state;
            const auto eigs = arnoldi_eigs(
                rawst.D * rawst.D,
                [&](const Vector& v) {
                    return mat_to_vec(
                        apply_transfer_right(rawst.A, vec_to_mat(v, rawst.D, rawst.D)));
                },
                aopts);
            const double e1_err = std::abs(eigs.at(0).value - cxd(1.0, 0.0));
            if (e1_err > 1e-8)
                issues.push_back({path.string(),
                                  "stored tensor is not normalized: |e1 - 1| = " +
                                      std::to_string(e1_err)});

            loaded.state = normalized(loaded.state);
            const FixedPointResiduals res = fixed_point_residuals(loaded.state);
            const double worst =
                std::max(std::max(res.left, res.right), std::max(res.pairing, res.eigenvalue));
            if (worst > 1e-8)
                issues.push_back({path.string(), "fixed-point residual " + std::to_string(worst) +
                                                     " exceeds 1e-8"});

            const SpinChainModel model =
                make_model(loaded.model_name, {{"J", loaded.J}, {"h", loaded.h}});
            const double energy = std::real(frob_inner(
                loaded.state.l,
                apply_block_transfer_right(loaded.state.A, model.h2, 2, loaded.state.r)));
            if (std::abs(energy - loaded.report.energy_density) > 1e-8)
                issues.push_back(
                    {path.string(), "reported energy density " +
                                        std::to_string(loaded.report.energy_density) +
                                        " differs from re-evaluation " + std::to_string(energy)});
        } catch (const Error& e) {
            issues.push_back({path.string(), e.what()});
        }
    }
    return issues;
}

int run_validate(const std::string& dir) {
    try {
        const std::vector<ValidationIssue> issues = validate_states(dir);
        if (issues.empty()) {
            std::printf("all state files pass\n");
            return 0;
        }
        for (const ValidationIssue& issue : issues)
            std::printf("%s: %s\n", issue.path.c_str(), issue.what.c_str());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }
}

} // namespace fes
