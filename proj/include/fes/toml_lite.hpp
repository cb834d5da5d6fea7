#pragma once

#include <map>
#include <string>
#include <vector>

namespace fes {

// Minimal TOML subset sufficient for run configs: one level of [section]
// headers, scalar values (string, integer, float, bool), flat homogeneous
// arrays, and # comments. Keys are exposed flattened as "section.key".
struct TomlValue {
    enum class Kind { String, Float, Int, Bool, Array };
    Kind kind = Kind::String;
    std::string str;
    double fval = 0.0;
    long long ival = 0;
    bool bval = false;
    std::vector<TomlValue> array;

    double as_double() const;
    long long as_int() const;
};

class TomlTable {
  public:
    static TomlTable parse_string(const std::string& text, const std::string& origin = "<string>");
    static TomlTable parse_file(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_array(const std::string& key) const;
    std::vector<long long> get_int_array(const std::string& key) const;
    std::vector<std::string> get_string_array(const std::string& key) const;

    const std::map<std::string, TomlValue>& values() const { return values_; }

  private:
    std::map<std::string, TomlValue> values_;
};

} // namespace fes
