#pragma once

#include <string>
#include <vector>

namespace fes {

// Version stamp baked into cache keys so fits never mix solver versions.
const char* code_version();

struct StageStatus {
    std::string name;     // solve, observe, analyze
    std::string status;   // done, cached, failed, partial
    std::string key;      // content hash of the stage inputs
    std::string detail;   // error text or a short note
    double seconds = 0.0;
};

struct FileEntry {
    std::string path;  // relative to the run directory
    std::string hash;  // fnv1a64 of the file bytes
};

struct RunManifest {
    int format_version = 1;
    std::string code;         // code_version()
    std::string config_toml;  // canonical config snapshot
    std::vector<StageStatus> stages;
    std::vector<FileEntry> files;

    StageStatus* find_stage(const std::string& name);
    const StageStatus* find_stage(const std::string& name) const;
    void upsert_stage(const StageStatus& stage);
    void record_file(const std::string& run_dir, const std::string& rel_path);

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);
};

// Best effort load: a missing manifest yields a fresh one, a corrupt manifest
// throws IoError.
RunManifest load_manifest(const std::string& run_dir);
void save_manifest(const RunManifest& manifest, const std::string& run_dir);

// Holds <run_dir>/.lock exclusively for the lifetime of the object.
class RunLock {
  public:
    explicit RunLock(const std::string& run_dir);
    ~RunLock();
    RunLock(const RunLock&) = delete;
    RunLock& operator=(const RunLock&) = delete;

  private:
    std::string path_;
    int fd_ = -1;
};

} // namespace fes
