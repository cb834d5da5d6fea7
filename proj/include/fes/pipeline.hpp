#pragma once

#include <string>
#include <vector>

#include "fes/manifest.hpp"
#include "fes/run_config.hpp"

namespace fes {

// Where a run keeps its artifacts. The manifest and the lock always live in
// run_dir; the other locations default to subdirectories but may be pointed
// elsewhere from the command line.
struct RunPaths {
    std::string run_dir;
    std::string states_dir;
    std::string obs_dir;
    std::string report_path;
    std::string csv_dir;

    static RunPaths defaults(const std::string& run_dir);
};

struct StageOutcome {
    bool ran = false;      // false when served from cache
    bool failed = false;   // nothing usable produced
    bool partial = false;  // some inputs failed, the rest went through
    std::string detail;
};

std::string state_file_name(int D);
std::string obs_file_name(int D);

StageOutcome stage_solve(const RunConfig& cfg, const RunPaths& paths, RunManifest& manifest);
StageOutcome stage_observe(const RunConfig& cfg, const RunPaths& paths, RunManifest& manifest);
StageOutcome stage_analyze(const RunConfig& cfg, const RunPaths& paths, RunManifest& manifest);

// Single-stage and full-pipeline drivers: take the run lock, load the
// manifest, run, persist the manifest. Return the process exit code
// (0 clean, 2 partial, 1 fatal).
int run_solve(const RunConfig& cfg, const RunPaths& paths);
int run_observe(const RunConfig& cfg, const RunPaths& paths);
int run_analyze(const RunConfig& cfg, const RunPaths& paths);
int run_pipeline(const RunConfig& cfg, const RunPaths& paths);

int run_solve(const RunConfig& cfg);
int run_observe(const RunConfig& cfg);
int run_analyze(const RunConfig& cfg);
int run_pipeline(const RunConfig& cfg);

struct ValidationIssue {
    std::string path;
    std::string what;
};

// Re-checks every state file under dir (or dir/states): parseability, stored
// tensor normalization, recomputed fixed-point residuals, and the reported
// energy density against a re-evaluation on the loaded state.
std::vector<ValidationIssue> validate_states(const std::string& dir);
int run_validate(const std::string& dir);

} // namespace fes
