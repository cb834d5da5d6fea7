#include "fes/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "fes/errors.hpp"

namespace fes {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

TomlValue parse_scalar(const std::string& tok, const std::string& where) {
    TomlValue v;
    if (tok.empty()) throw ConfigError(where + ": empty value");
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"')
            throw ConfigError(where + ": unterminated string " + tok);
        v.kind = TomlValue::Kind::String;
        v.str = tok.substr(1, tok.size() - 2);
        return v;
    }
    if (tok == "true" || tok == "false") {
        v.kind = TomlValue::Kind::Bool;
        v.bval = (tok == "true");
        return v;
    }
    // Integer when it parses fully as one and has no float syntax.
    if (tok.find_first_of(".eE") == std::string::npos) {
        long long iv = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), iv);
        if (ec == std::errc() && p == tok.data() + tok.size()) {
            v.kind = TomlValue::Kind::Int;
            v.ival = iv;
            v.fval = static_cast<double>(iv);
            return v;
        }
    }
    try {
        std::size_t pos = 0;
        const double fv = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        v.kind = TomlValue::Kind::Float;
        v.fval = fv;
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": cannot parse value '" + tok + "'");
    }
}

std::vector<std::string> split_array_items(const std::string& body, const std::string& where) {
    std::vector<std::string> items;
    std::string cur;
    bool in_string = false;
    for (char c : body) {
        if (c == '"') in_string = !in_string;
        if (c == ',' && !in_string) {
            items.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    const std::string last = trim(cur);
    if (!last.empty()) items.push_back(last);
    for (const auto& it : items)
        if (it.empty()) throw ConfigError(where + ": empty array element");
    return items;
}

} // namespace

double TomlValue::as_double() const {
    switch (kind) {
        case Kind::Float: return fval;
        case Kind::Int: return static_cast<double>(ival);
        default: throw ConfigError("config value is not numeric");
    }
}

long long TomlValue::as_int() const {
    if (kind == Kind::Int) return ival;
    if (kind == Kind::Float && fval == static_cast<long long>(fval))
        return static_cast<long long>(fval);
    throw ConfigError("config value is not an integer");
}

TomlTable TomlTable::parse_string(const std::string& text, const std::string& origin) {
    TomlTable table;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(where + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        TomlValue v;
        if (!val.empty() && val.front() == '[') {
            if (val.back() != ']') throw ConfigError(where + ": unterminated array");
            v.kind = TomlValue::Kind::Array;
            for (const auto& item : split_array_items(val.substr(1, val.size() - 2), where))
                v.array.push_back(parse_scalar(item, where));
        } else {
            v = parse_scalar(val, where);
        }
        const std::string full = section.empty() ? key : section + "." + key;
        table.values_[full] = std::move(v);
    }
    return table;
}

TomlTable TomlTable::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

std::string TomlTable::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second.kind != TomlValue::Kind::String)
        throw ConfigError("config key '" + key + "' is not a string");
    return it->second.str;
}

double TomlTable::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second.as_double();
}

long long TomlTable::get_int(const std::string& key, long long fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second.as_int();
}

bool TomlTable::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second.kind != TomlValue::Kind::Bool)
        throw ConfigError("config key '" + key + "' is not a bool");
    return it->second.bval;
}

std::vector<double> TomlTable::get_double_array(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return {};
    if (it->second.kind != TomlValue::Kind::Array)
        throw ConfigError("config key '" + key + "' is not an array");
    std::vector<double> out;
    for (const auto& v : it->second.array) out.push_back(v.as_double());
    return out;
}

std::vector<long long> TomlTable::get_int_array(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return {};
    if (it->second.kind != TomlValue::Kind::Array)
        throw ConfigError("config key '" + key + "' is not an array");
    std::vector<long long> out;
    for (const auto& v : it->second.array) out.push_back(v.as_int());
    return out;
}

std::vector<std::string> TomlTable::get_string_array(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return {};
    if (it->second.kind != TomlValue::Kind::Array)
        throw ConfigError("config key '" + key + "' is not an array");
    std::vector<std::string> out;
    for (const auto& v : it->second.array) {
        if (v.kind != TomlValue::Kind::String)
            throw ConfigError("config key '" + key + "' must be a string array");
        out.push_back(v.str);
    }
    return out;
}

} // namespace fes
