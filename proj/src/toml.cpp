#include "pcity/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pcity/errors.hpp"

namespace pcity::toml {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// cut a trailing comment, respecting quoted strings
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
        else if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
            return false;
    return true;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

std::string unquote(const std::string& s, int line) {
    if (s.size() < 2 || s.front() != '"' || s.back() != '"')
        throw ConfigError("ConfigError", "line " + std::to_string(line) + ": malformed string " + s);
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i] == '\\' && i + 2 < s.size() && (s[i + 1] == '"' || s[i + 1] == '\\'))
            out += s[++i];
        else
            out += s[i];
    }
    return out;
}

Value parse_value(const std::string& raw, int line) {
    Value v;
    v.line = line;
    const std::string s = trim(raw);
    if (s.empty()) throw ConfigError("ConfigError", "line " + std::to_string(line) + ": empty value");
    if (s.front() == '"') {
        v.kind = Value::Kind::String;
        v.str = unquote(s, line);
        return v;
    }
    if (s == "true" || s == "false") {
        v.kind = Value::Kind::Bool;
        v.boolean = (s == "true");
        return v;
    }
    if (s.front() == '[') {
        if (s.back() != ']')
            throw ConfigError("ConfigError", "line " + std::to_string(line) + ": unclosed array");
        std::string body = s.substr(1, s.size() - 2);
        std::vector<std::string> items;
        std::string cur;
        bool in_str = false;
        for (char c : body) {
            if (c == '"') in_str = !in_str;
            if (c == ',' && !in_str) {
                items.push_back(trim(cur));
                cur.clear();
            } else
                cur += c;
        }
        if (!trim(cur).empty()) items.push_back(trim(cur));
        bool strings = !items.empty() && items.front().front() == '"';
        v.kind = strings ? Value::Kind::StringArray : Value::Kind::NumberArray;
        for (const auto& it : items) {
            if (strings) {
                v.strs.push_back(unquote(it, line));
            } else {
                double d;
                if (!parse_number(it, d))
                    throw ConfigError("ConfigError",
                                      "line " + std::to_string(line) + ": bad array element " + it);
                v.nums.push_back(d);
            }
        }
        return v;
    }
    double d;
    if (!parse_number(s, d))
        throw ConfigError("ConfigError", "line " + std::to_string(line) + ": cannot parse value " + s);
    v.kind = Value::Kind::Number;
    v.num = d;
    return v;
}

} // namespace

Table Table::parse(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string raw, prefix;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3)
                throw ConfigError("ConfigError", "line " + std::to_string(line) + ": malformed table header");
            prefix = trim(s.substr(1, s.size() - 2));
            if (!valid_key(prefix))
                throw ConfigError("ConfigError",
                                  "line " + std::to_string(line) + ": bad table name [" + prefix + "]");
            continue;
        }
        std::size_t eq = std::string::npos;
        bool in_str = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"') in_str = !in_str;
            if (s[i] == '=' && !in_str) { eq = i; break; }
        }
        if (eq == std::string::npos)
            throw ConfigError("ConfigError", "line " + std::to_string(line) + ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        if (!valid_key(key) || key.find('.') != std::string::npos)
            throw ConfigError("ConfigError", "line " + std::to_string(line) + ": bad key \"" + key + "\"");
        std::string full = prefix.empty() ? key : prefix + "." + key;
        if (t.kv_.count(full))
            throw ConfigError("ConfigError", "line " + std::to_string(line) + ": duplicate key " + full);
        t.kv_[full] = parse_value(s.substr(eq + 1), line);
    }
    return t;
}

Table Table::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("ConfigError", "cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

const Value& Table::require(const std::string& key, Value::Kind kind) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("ConfigError", "missing key " + key);
    used_[key] = true;
    // an integer-looking number is still a Number; no promotion needed
    if (it->second.kind != kind)
        throw ConfigError("ConfigError", "key " + key + " has the wrong type");
    return it->second;
}

std::string Table::get_string(const std::string& key) const {
    return require(key, Value::Kind::String).str;
}
double Table::get_number(const std::string& key) const {
    return require(key, Value::Kind::Number).num;
}
bool Table::get_bool(const std::string& key) const {
    return require(key, Value::Kind::Bool).boolean;
}
std::vector<double> Table::get_numbers(const std::string& key) const {
    return require(key, Value::Kind::NumberArray).nums;
}
std::vector<std::string> Table::get_strings(const std::string& key) const {
    return require(key, Value::Kind::StringArray).strs;
}

std::string Table::get_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}
double Table::get_or(const std::string& key, double fallback) const {
    return has(key) ? get_number(key) : fallback;
}
bool Table::get_or(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
}

std::vector<std::string> Table::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : kv_)
        if (!used_.count(k) || !used_.at(k)) out.push_back(k);
    return out;
}

} // namespace pcity::toml
