#pragma once

#include <map>
#include <string>
#include <vector>

namespace pcity::toml {

/// Strict subset of TOML sufficient for scenario files: `[table.sub]`
/// headers, bare keys, strings, booleans, numbers, single-line homogeneous
/// arrays and `#` comments. Anything else is a parse error; duplicate keys
/// are errors. Keys are flattened to "table.sub.key".
struct Value {
    enum class Kind { String, Number, Bool, NumberArray, StringArray };
    Kind kind = Kind::Number;
    std::string str;
    double num = 0.0;
    bool boolean = false;
    std::vector<double> nums;
    std::vector<std::string> strs;
    int line = 0;
};

class Table {
public:
    static Table parse(const std::string& text);
    static Table parse_file(const std::string& path);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    // Typed getters mark the key as consumed; get_or returns the fallback for
    // absent keys. Wrong types throw ConfigError naming the key.
    std::string get_string(const std::string& key) const;
    double get_number(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<double> get_numbers(const std::string& key) const;
    std::vector<std::string> get_strings(const std::string& key) const;

    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_or(const std::string& key, double fallback) const;
    bool get_or(const std::string& key, bool fallback) const;

    /// Keys never consumed by a getter; fail-closed loaders reject them.
    std::vector<std::string> unused_keys() const;

private:
    const Value& require(const std::string& key, Value::Kind kind) const;
    std::map<std::string, Value> kv_;
    mutable std::map<std::string, bool> used_;
};

} // namespace pcity::toml
