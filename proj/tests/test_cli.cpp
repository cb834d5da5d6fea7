// End-to-end coverage of the run pipeline: config layering, stage caching,
// cache invalidation, state validation, locking and process exit codes.
// Everything runs on a deliberately tiny critical sweep (D = 2..5) so the
// whole file stays in the couple-of-seconds range.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "fes/errors.hpp"
#include "fes/hash.hpp"
#include "fes/manifest.hpp"
#include "fes/pipeline.hpp"
#include "fes/run_config.hpp"
#include "fes/toml_lite.hpp"

namespace fs = std::filesystem;

namespace {

std::string fes_binary() {
    if (const char* env = std::getenv("FES_BIN")) return env;
#ifdef FES_BIN_PATH
    return FES_BIN_PATH;
#else
    return "./fes";
#endif
}

// Fresh (recreated) scratch directory under the system temp root.
std::string temp_dir(const std::string& name) {
    const fs::path dir =
        fs::temp_directory_path() / ("fes_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    REQUIRE(bool(out));
    out << text;
}

int run_cli(const std::string& args, std::string* output = nullptr) {
    const std::string cmd = fes_binary() + " " + args + " 2>&1";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string text;
    char buf[512];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) text.append(buf, n);
    const int status = ::pclose(pipe);
    if (output) *output = text;
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

// Small critical sweep: enough bond dimensions for the analysis stage (4),
// cheap enough that the full pipeline finishes in about a second.
fes::RunConfig tiny_config() {
    fes::RunConfig cfg;
    cfg.dims = {2, 3, 4, 5};
    cfg.ops = {"sigma", "eps"};
    cfg.entropy = {"half", "interval:0.1"};
    cfg.spectrum_k = 4;
    cfg.points_per_decade = 12;
    cfg.x_max_factor = 30.0;
    cfg.s_lo = 0.1;
    cfg.s_hi = 20.0;
    cfg.s_points = 40;
    return cfg;
}

struct BaselineRun {
    fes::RunConfig cfg;
    std::string dir;
    int exit_code = -1;
};

// Solved once and copied by the cases that mutate run directories.
const BaselineRun& baseline() {
    static const BaselineRun run = [] {
        BaselineRun r;
        r.cfg = tiny_config();
        r.dir = temp_dir("baseline");
        r.cfg.out_dir = r.dir;
        r.exit_code = fes::run_pipeline(r.cfg);
        return r;
    }();
    return run;
}

std::string copy_run(const std::string& name) {
    const std::string dst = temp_dir(name);
    fs::copy(baseline().dir, dst,
             fs::copy_options::recursive | fs::copy_options::overwrite_existing);
    return dst;
}

std::string stage_status(const std::string& run_dir, const std::string& stage) {
    const fes::RunManifest manifest = fes::load_manifest(run_dir);
    const fes::StageStatus* status = manifest.find_stage(stage);
    REQUIRE(status != nullptr);
    return status->status;
}

} // namespace

TEST_CASE("a tiny full pipeline run produces states, observables, report and csvs") {
    const BaselineRun& run = baseline();
    REQUIRE(run.exit_code == 0);

    for (int D : {2, 3, 4, 5}) {
        CHECK(fs::exists(fs::path(run.dir) / "states" / fes::state_file_name(D)));
        CHECK(fs::exists(fs::path(run.dir) / "obs" / fes::obs_file_name(D)));
    }
    CHECK(fs::exists(fs::path(run.dir) / "obs" / "corr_sigma_D002.csv"));
    CHECK(fs::exists(fs::path(run.dir) / "obs" / "entropy.csv"));
    CHECK(fs::exists(fs::path(run.dir) / "obs" / "schmidt.csv"));
    CHECK(fs::exists(fs::path(run.dir) / "report.json"));
    CHECK(fs::exists(fs::path(run.dir) / "report_csv" / "central_charge.csv"));
    CHECK(fs::exists(fs::path(run.dir) / "report_csv" / "exponent_curve_sigma.csv"));
    CHECK(fs::exists(fs::path(run.dir) / "report_csv" / "kappa.csv"));
    CHECK(fs::exists(fs::path(run.dir) / "report_csv" / "ratios.csv"));

    for (const char* stage : {"solve", "observe", "analyze"})
        CHECK(stage_status(run.dir, stage) == "done");

    // Every artifact recorded in the manifest must exist with matching hash.
    const fes::RunManifest manifest = fes::load_manifest(run.dir);
    CHECK(manifest.code == fes::code_version());
    CHECK(!manifest.files.empty());
    for (const fes::FileEntry& f : manifest.files) {
        const fs::path full = fs::path(run.dir) / f.path;
        REQUIRE(fs::exists(full));
        CHECK(fes::file_hash_hex(full.string()) == f.hash);
    }

    const auto report = nlohmann::json::parse(read_file(fs::path(run.dir) / "report.json"));
    CHECK(report.contains("central_charge"));
    CHECK(report.contains("kappa"));
    CHECK(report.contains("ratios"));
    REQUIRE(report.contains("exponents"));
    CHECK(report["exponents"].contains("sigma"));
    CHECK(report["exponents"].contains("eps"));
    REQUIRE(report.contains("mu2"));
    double prev = 0.0;
    for (const auto& entry : report["mu2"]) {
        CHECK(double(entry["mu2"]) > prev);  // mu2 grows with D
        prev = entry["mu2"];
    }
}

TEST_CASE("an unchanged rerun is served entirely from the cache") {
    const std::string dir = copy_run("cache_hit");
    fes::RunConfig cfg = baseline().cfg;
    cfg.out_dir = dir;

    const std::string report_before = read_file(fs::path(dir) / "report.json");
    REQUIRE(fes::run_pipeline(cfg) == 0);

    for (const char* stage : {"solve", "observe", "analyze"})
        CHECK(stage_status(dir, stage) == "cached");
    CHECK(read_file(fs::path(dir) / "report.json") == report_before);

    // Cached stages report zero recomputation time in the manifest.
    const fes::RunManifest manifest = fes::load_manifest(dir);
    for (const fes::StageStatus& stage : manifest.stages) CHECK(stage.seconds == 0.0);
}

TEST_CASE("changing an analysis knob reruns only the analysis stage") {
    const std::string dir = copy_run("invalidate_analyze");
    fes::RunConfig cfg = baseline().cfg;
    cfg.out_dir = dir;
    cfg.s_points = 50;

    REQUIRE(fes::run_pipeline(cfg) == 0);
    CHECK(stage_status(dir, "solve") == "cached");
    CHECK(stage_status(dir, "observe") == "cached");
    CHECK(stage_status(dir, "analyze") == "done");

    const auto report = nlohmann::json::parse(read_file(fs::path(dir) / "report.json"));
    CHECK(int(report["s_grid"]["points"]) == 50);
}

TEST_CASE("changing a solver knob reruns the whole chain") {
    const std::string dir = copy_run("invalidate_solve");
    fes::RunConfig cfg = baseline().cfg;
    cfg.out_dir = dir;
    cfg.tol = 3e-9;

    REQUIRE(fes::run_pipeline(cfg) == 0);
    CHECK(stage_status(dir, "solve") == "done");
    CHECK(stage_status(dir, "observe") == "done");
    CHECK(stage_status(dir, "analyze") == "done");
}

TEST_CASE("a partial stage is retried instead of being served from the cache") {
    const std::string dir = copy_run("partial_retry");
    fes::RunConfig cfg = baseline().cfg;
    cfg.out_dir = dir;
    const fes::RunPaths paths = fes::RunPaths::defaults(dir);

    const fs::path victim = fs::path(dir) / "states" / fes::state_file_name(5);
    const std::string good_bytes = read_file(victim);
    write_file(victim, good_bytes.substr(0, good_bytes.size() / 2));

    // First pass: one state fails to load, three go through.
    REQUIRE(fes::run_observe(cfg, paths) == 2);
    CHECK(stage_status(dir, "observe") == "partial");

    // Same inputs again: the partial outcome must not be treated as a hit.
    fes::RunManifest manifest = fes::load_manifest(dir);
    const fes::StageOutcome retry = fes::stage_observe(cfg, paths, manifest);
    CHECK(retry.ran);
    CHECK(retry.partial);

    // Repairing the input turns the retry into a clean pass.
    write_file(victim, good_bytes);
    REQUIRE(fes::run_observe(cfg, paths) == 0);
    CHECK(stage_status(dir, "observe") == "done");
    for (int D : {2, 3, 4, 5})
        CHECK(fs::exists(fs::path(dir) / "obs" / fes::obs_file_name(D)));
}

TEST_CASE("validate flags perturbed tensors and truncated state files") {
    const std::string dir = copy_run("validate");
    CHECK(fes::validate_states(dir).empty());

    // A relative perturbation of 1e-3 on one tensor entry breaks the stored
    // normalization and the recorded energy; both checks are downstream of
    // the raw parse, so the file still loads.
    const fs::path perturbed = fs::path(dir) / "states" / fes::state_file_name(3);
    auto doc = nlohmann::json::parse(read_file(perturbed));
    doc["A"][0][0][0][0] = double(doc["A"][0][0][0][0]) * (1.0 + 1e-3) + 1e-4;
    write_file(perturbed, doc.dump());

    const fs::path truncated = fs::path(dir) / "states" / fes::state_file_name(2);
    const std::string bytes = read_file(truncated);
    write_file(truncated, bytes.substr(0, bytes.size() / 3));

    const auto issues = fes::validate_states(dir);
    REQUIRE(issues.size() >= 2);
    bool saw_perturbed = false, saw_truncated = false;
    for (const auto& issue : issues) {
        if (issue.path.find("state_D003") != std::string::npos) saw_perturbed = true;
        if (issue.path.find("state_D002") != std::string::npos) saw_truncated = true;
    }
    CHECK(saw_perturbed);
    CHECK(saw_truncated);

    CHECK(fes::run_validate(dir) == 2);
    CHECK(fes::run_validate(baseline().dir) == 0);
}

TEST_CASE("the run lock admits one writer at a time") {
    const std::string dir = temp_dir("lock");
    {
        fes::RunLock held(dir);
        CHECK_THROWS_AS(fes::RunLock{dir}, fes::IoError);
    }
    // Released on destruction: the next writer gets in.
    fes::RunLock again(dir);

    // A stale lock file (say from a killed process) blocks runs with a
    // pointer to the file instead of corrupting the directory.
    const std::string stale = temp_dir("stale_lock");
    write_file(fs::path(stale) / ".lock", "");
    fes::RunConfig cfg = tiny_config();
    cfg.out_dir = stale;
    CHECK_THROWS_AS(fes::run_pipeline(cfg), fes::IoError);
}

TEST_CASE("analysis without enough observable records fails with exit code 1") {
    const std::string dir = temp_dir("fatal");
    fes::RunConfig cfg = tiny_config();
    cfg.out_dir = dir;
    CHECK(fes::run_analyze(cfg) == 1);
    CHECK(stage_status(dir, "analyze") == "failed");
}

TEST_CASE("config validation rejects malformed values") {
    const auto reject = [](void (*tweak)(fes::RunConfig&)) {
        fes::RunConfig cfg;
        tweak(cfg);
        CHECK_THROWS_AS(cfg.validate(), fes::ConfigError);
    };
    reject([](fes::RunConfig& c) { c.model = "xy"; });
    reject([](fes::RunConfig& c) { c.dims = {8, 4}; });
    reject([](fes::RunConfig& c) { c.dims = {}; });
    reject([](fes::RunConfig& c) { c.tol = 0.0; });
    reject([](fes::RunConfig& c) { c.spectrum_k = 1; });
    reject([](fes::RunConfig& c) { c.interpolant = "cubic"; });
    reject([](fes::RunConfig& c) { c.s_lo = 0.5; c.s_hi = 0.1; });
    reject([](fes::RunConfig& c) { c.entropy = {"interval:abc"}; });
    reject([](fes::RunConfig& c) { c.entropy = {"slab"}; });
}

TEST_CASE("toml configs parse into the documented fields") {
    const char* text = R"([model]
name = "ising"
h = 1.3

[solve]
dims = [2, 3]
tol = 2e-7
seed = 9

[observe]
ops = ["sigma"]
entropy = ["half", "interval:0.2"]
interpolant = "linear"

[analyze]
s_points = 25

[output]
dir = "runs/custom"
)";
    const fes::RunConfig cfg = fes::config_from_toml(fes::TomlTable::parse_string(text));
    CHECK(cfg.h == 1.3);
    CHECK(cfg.J == 1.0);  // untouched fields keep their defaults
    CHECK(cfg.dims == std::vector<int>{2, 3});
    CHECK(cfg.tol == 2e-7);
    CHECK(cfg.seed == 9);
    CHECK(cfg.ops == std::vector<std::string>{"sigma"});
    CHECK(cfg.interval_scales() == std::vector<double>{0.2});
    CHECK(cfg.entropy_half());
    CHECK(cfg.interpolant == "linear");
    CHECK(cfg.s_points == 25);
    CHECK(cfg.max_iter == 2000);
    CHECK(cfg.out_dir == "runs/custom");

    // The canonical snapshot round-trips through the same parser.
    const fes::RunConfig again =
        fes::config_from_toml(fes::TomlTable::parse_string(cfg.canonical_toml()));
    CHECK(again.canonical_toml() == cfg.canonical_toml());
}

TEST_CASE("command line flags override the config file which overrides defaults") {
    const std::string dir = temp_dir("layering");
    const fs::path cfg_path = fs::path(dir) / "run.toml";
    write_file(cfg_path, R"([model]
h = 1.7

[solve]
dims = [2, 3]
tol = 2e-7
max_iter = 700

[observe]
ops = ["sigma"]
entropy = ["half"]

[output]
dir = "should_be_overridden"
)");

    const std::string out = dir + "/run";
    std::string text;
    const int code = run_cli("solve --config " + cfg_path.string() + " --h 1.5 --out " + out, &text);
    REQUIRE(code == 0);
    CHECK(fs::exists(fs::path(out) / "states" / fes::state_file_name(2)));
    CHECK(fs::exists(fs::path(out) / "states" / fes::state_file_name(3)));

    // The manifest keeps the resolved config; check each layer's winner.
    const fes::RunManifest manifest = fes::load_manifest(out);
    const fes::RunConfig seen =
        fes::config_from_toml(fes::TomlTable::parse_string(manifest.config_toml));
    CHECK(seen.h == 1.5);                        // flag beats file
    CHECK(seen.tol == 2e-7);                     // file beats default
    CHECK(seen.max_iter == 700);                 // file beats default
    CHECK(seen.dims == std::vector<int>{2, 3});  // file beats default
    CHECK(seen.J == 1.0);                        // default survives
    CHECK(seen.out_dir == out);                  // flag beats file
}

TEST_CASE("observe accepts the run directory or its states subdirectory") {
    const std::string dir = copy_run("observe_paths");
    fs::remove_all(fs::path(dir) / "obs");

    std::string text;
    const int code = run_cli("observe --states " + dir +
                                 "/states --ops sigma --entropy half --spectrum-k 4",
                             &text);
    REQUIRE(code == 0);
    for (int D : {2, 3, 4, 5})
        CHECK(fs::exists(fs::path(dir) / "obs" / fes::obs_file_name(D)));
}

TEST_CASE("process exit codes separate clean, partial, usage and fatal runs") {
    std::string text;
    CHECK(run_cli("--help", &text) == 0);
    CHECK(text.find("solve") != std::string::npos);
    CHECK(run_cli("run --help", &text) == 0);

    CHECK(run_cli("", &text) == 1);               // a subcommand is required
    CHECK(run_cli("solve --bogus", &text) == 1);  // unknown flag

    const std::string dir = temp_dir("cli_fatal");
    CHECK(run_cli("solve --model xy --out " + dir, &text) == 1);
    CHECK(text.find("error:") != std::string::npos);

    const std::string vdir = temp_dir("cli_validate_empty");
    CHECK(run_cli("validate " + vdir, &text) == 2);
    CHECK(text.find("no state files") != std::string::npos);
}
