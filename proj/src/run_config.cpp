#include "fes/run_config.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "fes/errors.hpp"
#include "fes/insertions.hpp"

namespace fes {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string full_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void RunConfig::validate() const {
    if (model != "ising") throw ConfigError("unknown model '" + model + "' (available: ising)");
    if (dims.empty()) throw ConfigError("config: dims must name at least one bond dimension");
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] < 1) throw ConfigError("config: bond dimensions must be positive");
        if (i > 0 && dims[i] <= dims[i - 1])
            throw ConfigError("config: dims must be strictly ascending");
    }
    if (tol <= 0.0) throw ConfigError("config: tol must be positive");
    if (max_iter < 1) throw ConfigError("config: max_iter must be positive");
    for (const std::string& label : ops) named_insertion(label);  // throws on unknown labels
    interval_scales();                                            // validates entropy entries
    if (spectrum_k < 2) throw ConfigError("config: spectrum_k must be at least 2");
    if (points_per_decade < 1) throw ConfigError("config: points_per_decade must be positive");
    if (x_max_factor <= 0.0) throw ConfigError("config: x_max_factor must be positive");
    if (interpolant != "spline" && interpolant != "linear")
        throw ConfigError("config: interpolant must be 'spline' or 'linear'");
    if (interval_max_bond < 1) throw ConfigError("config: interval_max_bond must be positive");
    if (s_lo <= 0.0 || s_hi <= s_lo) throw ConfigError("config: need 0 < s_lo < s_hi");
    if (s_points < 2) throw ConfigError("config: s_points must be at least 2");
    if (out_dir.empty()) throw ConfigError("config: output directory must be set");
}

VumpsOptions RunConfig::vumps_options() const {
    VumpsOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    opts.seed = seed;
    return opts;
}

ObserveOptions RunConfig::observe_options() const {
    ObserveOptions opts;
    opts.ops = ops;
    opts.spectrum_K = spectrum_k;
    opts.points_per_decade = points_per_decade;
    opts.x_max_factor = x_max_factor;
    opts.half_line = entropy_half();
    opts.interval_scales = interval_scales();
    opts.interval_max_bond = interval_max_bond;
    opts.interp = interpolant == "linear" ? InterpolantKind::Linear : InterpolantKind::Spline;
    opts.sigma_connected = sigma_connected;
    return opts;
}

std::vector<double> RunConfig::interval_scales() const {
    std::vector<double> scales;
    for (const std::string& entry : entropy) {
        if (entry == "half") continue;
        if (entry.rfind("interval:", 0) == 0) {
            const std::string num = entry.substr(9);
            try {
                std::size_t used = 0;
                const double s = std::stod(num, &used);
                if (used != num.size() || s <= 0.0) throw std::invalid_argument(num);
                scales.push_back(s);
            } catch (const std::exception&) {
                throw ConfigError("config: bad interval scale '" + entry + "'");
            }
        } else {
            throw ConfigError("config: entropy entries are 'half' or 'interval:<s>', got '" + entry +
                              "'");
        }
    }
    return scales;
}

bool RunConfig::entropy_half() const {
    return std::find(entropy.begin(), entropy.end(), "half") != entropy.end();
}

std::string RunConfig::canonical_toml() const {
    std::ostringstream out;
    out << "[model]\n";
    out << "name = \"" << model << "\"\n";
    out << "J = " << full_double(J) << "\n";
    out << "h = " << full_double(h) << "\n\n";
    out << "[solve]\n";
    out << "dims = [";
    for (std::size_t i = 0; i < dims.size(); ++i) out << (i ? ", " : "") << dims[i];
    out << "]\n";
    out << "tol = " << full_double(tol) << "\n";
    out << "max_iter = " << max_iter << "\n";
    out << "seed = " << seed << "\n\n";
    out << "[observe]\n";
    out << "ops = [";
    for (std::size_t i = 0; i < ops.size(); ++i) out << (i ? ", " : "") << '"' << ops[i] << '"';
    out << "]\n";
    out << "entropy = [";
    for (std::size_t i = 0; i < entropy.size(); ++i)
        out << (i ? ", " : "") << '"' << entropy[i] << '"';
    out << "]\n";
    out << "spectrum_k = " << spectrum_k << "\n";
    out << "points_per_decade = " << points_per_decade << "\n";
    out << "x_max_factor = " << full_double(x_max_factor) << "\n";
    out << "interpolant = \"" << interpolant << "\"\n";
    out << "sigma_connected = " << (sigma_connected ? "true" : "false") << "\n";
    out << "interval_max_bond = " << interval_max_bond << "\n\n";
    out << "[analyze]\n";
    out << "s_lo = " << full_double(s_lo) << "\n";
    out << "s_hi = " << full_double(s_hi) << "\n";
    out << "s_points = " << s_points << "\n\n";
    out << "[output]\n";
    out << "dir = \"" << out_dir << "\"\n";
    return out.str();
}

RunConfig config_from_toml(const TomlTable& table) {
    RunConfig cfg;
    cfg.model = table.get_string("model.name", cfg.model);
    cfg.J = table.get_double("model.J", cfg.J);
    cfg.h = table.get_double("model.h", cfg.h);

    if (table.has("solve.dims")) {
        cfg.dims.clear();
        for (long long v : table.get_int_array("solve.dims")) cfg.dims.push_back(static_cast<int>(v));
    }
    cfg.tol = table.get_double("solve.tol", cfg.tol);
    cfg.max_iter = static_cast<int>(table.get_int("solve.max_iter", cfg.max_iter));
    cfg.seed = static_cast<std::uint64_t>(table.get_int("solve.seed", static_cast<long long>(cfg.seed)));

    if (table.has("observe.ops")) cfg.ops = table.get_string_array("observe.ops");
    if (table.has("observe.entropy")) cfg.entropy = table.get_string_array("observe.entropy");
    cfg.spectrum_k = static_cast<int>(table.get_int("observe.spectrum_k", cfg.spectrum_k));
    cfg.points_per_decade =
        static_cast<int>(table.get_int("observe.points_per_decade", cfg.points_per_decade));
    cfg.x_max_factor = table.get_double("observe.x_max_factor", cfg.x_max_factor);
    cfg.interpolant = table.get_string("observe.interpolant", cfg.interpolant);
    cfg.sigma_connected = table.get_bool("observe.sigma_connected", cfg.sigma_connected);
    cfg.interval_max_bond =
        static_cast<int>(table.get_int("observe.interval_max_bond", cfg.interval_max_bond));

    cfg.s_lo = table.get_double("analyze.s_lo", cfg.s_lo);
    cfg.s_hi = table.get_double("analyze.s_hi", cfg.s_hi);
    cfg.s_points = static_cast<int>(table.get_int("analyze.s_points", cfg.s_points));

    cfg.out_dir = table.get_string("output.dir", cfg.out_dir);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    return config_from_toml(TomlTable::parse_file(path));
}

} // namespace fes
