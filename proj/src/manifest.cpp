#include "fes/manifest.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "fes/errors.hpp"
#include "fes/hash.hpp"

namespace fes {

namespace {
using nlohmann::json;
}

const char* code_version() { return "fes-0.1.0"; }

StageStatus* RunManifest::find_stage(const std::string& name) {
    for (StageStatus& s : stages)
        if (s.name == name) return &s;
    return nullptr;
}

const StageStatus* RunManifest::find_stage(const std::string& name) const {
    for (const StageStatus& s : stages)
        if (s.name == name) return &s;
    return nullptr;
}

void RunManifest::upsert_stage(const StageStatus& stage) {
    if (StageStatus* existing = find_stage(stage.name)) {
        *existing = stage;
        return;
    }
    stages.push_back(stage);
}

void RunManifest::record_file(const std::string& run_dir, const std::string& rel_path) {
    FileEntry entry;
    entry.path = rel_path;
    entry.hash = file_hash_hex((std::filesystem::path(run_dir) / rel_path).string());
    for (FileEntry& f : files) {
        if (f.path == rel_path) {
            f = entry;
            return;
        }
    }
    files.push_back(entry);
}

std::string RunManifest::to_json() const {
    json j;
    j["format_version"] = format_version;
    j["code"] = code;
    j["config_toml"] = config_toml;
    j["stages"] = json::array();
    for (const StageStatus& s : stages) {
        json js;
        js["name"] = s.name;
        js["status"] = s.status;
        js["key"] = s.key;
        js["detail"] = s.detail;
        js["seconds"] = s.seconds;
        j["stages"].push_back(js);
    }
    j["files"] = json::array();
    for (const FileEntry& f : files) {
        json jf;
        jf["path"] = f.path;
        jf["hash"] = f.hash;
        j["files"].push_back(jf);
    }
    return j.dump(1);
}

RunManifest RunManifest::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("manifest parse failure: ") + e.what());
    }
    try {
        RunManifest m;
        m.format_version = j.at("format_version").get<int>();
        m.code = j.at("code").get<std::string>();
        m.config_toml = j.at("config_toml").get<std::string>();
        for (const json& js : j.at("stages")) {
            StageStatus s;
            s.name = js.at("name").get<std::string>();
            s.status = js.at("status").get<std::string>();
            s.key = js.at("key").get<std::string>();
            s.detail = js.at("detail").get<std::string>();
            s.seconds = js.at("seconds").get<double>();
            m.stages.push_back(std::move(s));
        }
        for (const json& jf : j.at("files")) {
            FileEntry f;
            f.path = jf.at("path").get<std::string>();
            f.hash = jf.at("hash").get<std::string>();
            m.files.push_back(std::move(f));
        }
        return m;
    } catch (const json::exception& e) {
        throw IoError(std::string("manifest is missing fields: ") + e.what());
    }
}

RunManifest load_manifest(const std::string& run_dir) {
    const std::filesystem::path path = std::filesystem::path(run_dir) / "manifest.json";
    std::ifstream in(path, std::ios::binary);
    if (!in) return RunManifest{};
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return RunManifest::from_json(text);
}

void save_manifest(const RunManifest& manifest, const std::string& run_dir) {
    const std::filesystem::path path = std::filesystem::path(run_dir) / "manifest.json";
    const std::string tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out << manifest.to_json();
        if (!out) throw IoError("short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename " + tmp + " failed: " + ec.message());
}

RunLock::RunLock(const std::string& run_dir) {
    path_ = (std::filesystem::path(run_dir) / ".lock").string();
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0)
        throw IoError("run directory is locked by another process (" + path_ +
                      " exists); remove the stale lock if no run is active");
}

RunLock::~RunLock() {
    if (fd_ >= 0) {
        ::close(fd_);
        ::unlink(path_.c_str());
    }
}

} // namespace fes
