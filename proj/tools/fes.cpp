#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fes/errors.hpp"
#include "fes/pipeline.hpp"
#include "fes/run_config.hpp"

namespace fs = std::filesystem;

namespace {

// One bundle of override flags mirroring RunConfig; values only take effect
// on fields whose flag was actually given, so they layer over a config file.
struct ConfigFlags {
    std::string config_path;
    fes::RunConfig v;  // local storage for the bound options

    void attach(CLI::App* app) {
        app->set_help_flag("--help", "print this help and exit");  // frees -h for the field flag
        app->add_option("--config", config_path, "TOML config file");
        app->add_option("--model", v.model, "model name (ising)");
        app->add_option("--J", v.J, "coupling J");
        app->add_option("--h", v.h, "transverse field h");
        app->add_option("--dims", v.dims, "bond dimension list, ascending")->delimiter(',');
        app->add_option("--tol", v.tol, "gradient tolerance for the solver");
        app->add_option("--max-iter", v.max_iter, "solver iteration cap");
        app->add_option("--seed", v.seed, "random seed");
        app->add_option("--ops", v.ops, "operator labels to measure")->delimiter(',');
        app->add_option("--entropy", v.entropy, "entropy cuts: half and/or interval:<s>")
            ->delimiter(',');
        app->add_option("--spectrum-k", v.spectrum_k, "transfer eigenvalues to record");
        app->add_option("--points-per-decade", v.points_per_decade,
                        "correlator grid density (log spacing)");
        app->add_option("--x-max-factor", v.x_max_factor,
                        "correlators reach x = factor * mu2");
        app->add_option("--interpolant", v.interpolant, "spline or linear");
        app->add_option("--sigma-connected", v.sigma_connected,
                        "measure sigma as a connected correlator (true/false)");
        app->add_option("--interval-max-bond", v.interval_max_bond,
                        "largest D for interval entropies");
        app->add_option("--s-lo", v.s_lo, "lower edge of the s grid");
        app->add_option("--s-hi", v.s_hi, "upper edge of the s grid");
        app->add_option("--s-points", v.s_points, "points in the s grid");
        app->add_option("--out", v.out_dir, "run directory");
    }

    fes::RunConfig resolve(const CLI::App* app) const {
        fes::RunConfig cfg;
        if (app->count("--config") > 0) cfg = fes::load_config(config_path);
        const auto take = [&](const char* flag, auto member) {
            if (app->count(flag) > 0) cfg.*member = v.*member;
        };
        take("--model", &fes::RunConfig::model);
        take("--J", &fes::RunConfig::J);
        take("--h", &fes::RunConfig::h);
        take("--dims", &fes::RunConfig::dims);
        take("--tol", &fes::RunConfig::tol);
        take("--max-iter", &fes::RunConfig::max_iter);
        take("--seed", &fes::RunConfig::seed);
        take("--ops", &fes::RunConfig::ops);
        take("--entropy", &fes::RunConfig::entropy);
        take("--spectrum-k", &fes::RunConfig::spectrum_k);
        take("--points-per-decade", &fes::RunConfig::points_per_decade);
        take("--x-max-factor", &fes::RunConfig::x_max_factor);
        take("--interpolant", &fes::RunConfig::interpolant);
        take("--sigma-connected", &fes::RunConfig::sigma_connected);
        take("--interval-max-bond", &fes::RunConfig::interval_max_bond);
        take("--s-lo", &fes::RunConfig::s_lo);
        take("--s-hi", &fes::RunConfig::s_hi);
        take("--s-points", &fes::RunConfig::s_points);
        take("--out", &fes::RunConfig::out_dir);
        return cfg;
    }
};

fs::path parent_or_dot(const fs::path& p) {
    const fs::path parent = p.parent_path();
    return parent.empty() ? fs::path(".") : parent;
}

bool contains_files(const fs::path& dir, const std::string& stem_prefix) {
    if (!fs::exists(dir)) return false;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.rfind(stem_prefix, 0) == 0 && name.size() > 5 &&
            name.compare(name.size() - 5, 5, ".json") == 0)
            return true;
    }
    return false;
}

// --states may point at the run directory or directly at its states
// directory; either way the manifest lives in the run directory.
fes::RunPaths paths_for_states(const fes::RunConfig& cfg, const std::string& states_arg) {
    fs::path run = states_arg.empty() ? fs::path(cfg.out_dir) : fs::path(states_arg);
    fs::path states_dir;
    if (run.filename() == "states") {
        states_dir = run;
        run = parent_or_dot(run);
    } else if (fs::exists(run / "states")) {
        states_dir = run / "states";
    } else if (contains_files(run, "state_")) {
        states_dir = run;
    } else {
        states_dir = run / "states";
    }
    fes::RunPaths paths = fes::RunPaths::defaults(run.string());
    paths.states_dir = states_dir.string();
    return paths;
}

fes::RunPaths paths_for_data(const fes::RunConfig& cfg, const std::string& data_arg) {
    fs::path run = data_arg.empty() ? fs::path(cfg.out_dir) : fs::path(data_arg);
    fs::path obs_dir;
    if (run.filename() == "obs") {
        obs_dir = run;
        run = parent_or_dot(run);
    } else if (fs::exists(run / "obs")) {
        obs_dir = run / "obs";
    } else if (contains_files(run, "obs_")) {
        obs_dir = run;
    } else {
        obs_dir = run / "obs";
    }
    fes::RunPaths paths = fes::RunPaths::defaults(run.string());
    paths.obs_dir = obs_dir.string();
    return paths;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"uniform-MPS ground states of the transverse-field Ising chain and "
                 "finite-entanglement scaling analysis"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);

    ConfigFlags solve_flags, observe_flags, analyze_flags, run_flags;
    std::string observe_states, observe_out;
    std::string analyze_data, analyze_report, analyze_csv;
    std::string validate_dir;

    CLI::App* solve_cmd =
        app.add_subcommand("solve", "optimize ground states over the bond dimension list");
    solve_flags.attach(solve_cmd);

    CLI::App* observe_cmd = app.add_subcommand(
        "observe", "measure correlators, spectra and entropies on solved states");
    observe_flags.attach(observe_cmd);
    observe_cmd->add_option("--states", observe_states,
                            "run directory (or its states/ subdirectory) to read");
    observe_cmd->get_option("--out")->description(
        "directory for observable records (default <run>/obs)");

    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "fit exponents and central charges from observables");
    analyze_flags.attach(analyze_cmd);
    analyze_cmd->add_option("--data", analyze_data,
                            "run directory (or its obs/ subdirectory) to read");
    analyze_cmd->add_option("--report", analyze_report,
                            "report path (default <run>/report.json)");
    analyze_cmd->add_option("--csv-dir", analyze_csv,
                            "directory for plot-ready CSVs (default <run>/report_csv)");

    CLI::App* run_cmd =
        app.add_subcommand("run", "full pipeline: solve, observe, analyze with caching");
    run_flags.attach(run_cmd);

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "re-check state files for invariant violations");
    validate_cmd->add_option("dir", validate_dir, "run directory or states directory")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve_cmd->parsed()) {
            const fes::RunConfig cfg = solve_flags.resolve(solve_cmd);
            return fes::run_solve(cfg, fes::RunPaths::defaults(cfg.out_dir));
        }
        if (observe_cmd->parsed()) {
            const fes::RunConfig cfg = observe_flags.resolve(observe_cmd);
            fes::RunPaths paths = paths_for_states(cfg, observe_states);
            if (observe_cmd->count("--out") > 0) paths.obs_dir = cfg.out_dir;
            return fes::run_observe(cfg, paths);
        }
        if (analyze_cmd->parsed()) {
            const fes::RunConfig cfg = analyze_flags.resolve(analyze_cmd);
            fes::RunPaths paths = paths_for_data(cfg, analyze_data);
            if (!analyze_report.empty()) paths.report_path = analyze_report;
            if (!analyze_csv.empty()) paths.csv_dir = analyze_csv;
            return fes::run_analyze(cfg, paths);
        }
        if (run_cmd->parsed()) {
            const fes::RunConfig cfg = run_flags.resolve(run_cmd);
            return fes::run_pipeline(cfg, fes::RunPaths::defaults(cfg.out_dir));
        }
        if (validate_cmd->parsed()) return fes::run_validate(validate_dir);
    } catch (const fes::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
