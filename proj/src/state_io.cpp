#include "fes/state_io.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "fes/errors.hpp"

namespace fes {

namespace {
using nlohmann::json;
}

std::string state_to_json(const UniformMPS& state, const SpinChainModel& model,
                          const SolveReport& report) {
    json j;
    j["format_version"] = 1;
    j["model"] = model.name;
    json params = json::object();
    for (const auto& [key, value] : model.params) params[key] = value;
    j["params"] = params;
    j["D"] = state.D;
    j["d"] = state.d;
    j["energy_density"] = report.energy_density;
    j["gradient_norm"] = report.gradient_norm;
    j["converged"] = report.converged;
    j["iterations"] = report.iterations;
    j["seed"] = report.seed;
    j["wall_seconds"] = report.wall_seconds;

    json A = json::array();
    for (int i = 0; i < state.D; ++i) {
        json row = json::array();
        for (int s = 0; s < state.d; ++s) {
            json col = json::array();
            for (int k = 0; k < state.D; ++k) {
                const cxd a = state.A[s](i, k);
                col.push_back(json::array({a.real(), a.imag()}));
            }
            row.push_back(col);
        }
        A.push_back(row);
    }
    j["A"] = A;
    return j.dump(1);
}

LoadedState state_from_json(const std::string& text, bool normalize) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("state parse failure: ") + e.what());
    }
    try {
        LoadedState out;
        if (j.at("format_version").get<int>() != 1)
            throw IoError("unsupported state format_version");
        out.model_name = j.at("model").get<std::string>();
        out.J = j.at("params").value("J", 1.0);
        out.h = j.at("params").value("h", 1.0);

        const int D = j.at("D").get<int>();
        const int d = j.at("d").get<int>();
        if (D < 1 || d < 2) throw IoError("state file has invalid dimensions");
        out.state.D = D;
        out.state.d = d;
        out.state.A.assign(d, Matrix::Zero(D, D));
        const json& A = j.at("A");
        if (static_cast<int>(A.size()) != D) throw IoError("tensor row count does not match D");
        for (int i = 0; i < D; ++i) {
            const json& row = A.at(i);
            if (static_cast<int>(row.size()) != d) throw IoError("tensor physical count does not match d");
            for (int s = 0; s < d; ++s) {
                const json& col = row.at(s);
                if (static_cast<int>(col.size()) != D) throw IoError("tensor column count does not match D");
                for (int k = 0; k < D; ++k)
                    out.state.A[s](i, k) = {col.at(k).at(0).get<double>(),
                                            col.at(k).at(1).get<double>()};
            }
        }
        if (normalize) out.state = normalized(out.state);

        out.report.D = D;
        out.report.energy_density = j.at("energy_density").get<double>();
        out.report.gradient_norm = j.at("gradient_norm").get<double>();
        out.report.converged = j.at("converged").get<bool>();
        out.report.iterations = j.at("iterations").get<int>();
        out.report.seed = j.at("seed").get<std::uint64_t>();
        out.report.wall_seconds = j.value("wall_seconds", 0.0);
        return out;
    } catch (const json::exception& e) {
        throw IoError(std::string("state file is missing fields: ") + e.what());
    }
}

void save_state(const std::string& path, const UniformMPS& state, const SpinChainModel& model,
                const SolveReport& report) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out << state_to_json(state, model, report);
        if (!out) throw IoError("short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename " + tmp + " -> " + path + " failed: " + ec.message());
}

LoadedState load_state(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return state_from_json(text);
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

} // namespace fes
