#include "finray/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "finray/errors.hpp"
#include "finray/rng.hpp"

namespace finray {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // prefer the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        if (std::strtod(probe, nullptr) == v) return probe;
    }
    return buf;
}

FlatConfig FlatConfig::parse_string(const std::string& text) {
    FlatConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed section");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        cfg.kv_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
}

FlatConfig FlatConfig::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_string(ss.str());
}

std::string FlatConfig::serialize() const {
    // group by section; std::map already sorts keys
    std::ostringstream out;
    std::string cur_section;
    bool first = true;
    for (const auto& [key, value] : kv_) {
        std::size_t dot = key.find('.');
        std::string section = dot == std::string::npos ? "" : key.substr(0, dot);
        std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
        if (section != cur_section || first) {
            if (!section.empty() && section != cur_section) out << "[" << section << "]\n";
            cur_section = section;
            first = false;
        }
        out << name << " = " << value << "\n";
    }
    return out.str();
}

void FlatConfig::save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write config file: " + path);
    f << serialize();
    if (!f) throw DataError("write failed for config file: " + path);
}

void FlatConfig::set_double(const std::string& key, double v) { kv_[key] = format_double(v); }
void FlatConfig::set_int(const std::string& key, std::int64_t v) { kv_[key] = std::to_string(v); }
void FlatConfig::set_u64(const std::string& key, std::uint64_t v) { kv_[key] = std::to_string(v); }

std::optional<std::string> FlatConfig::get(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    return it->second;
}

std::string FlatConfig::get_or(const std::string& key, const std::string& def) const {
    auto v = get(key);
    return v ? *v : def;
}

std::string FlatConfig::require(const std::string& key) const {
    auto v = get(key);
    if (!v) throw ConfigError("missing required config key: " + key);
    return *v;
}

double FlatConfig::get_double(const std::string& key) const {
    std::string s = require(key);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw ConfigError("config key " + key + ": not a number: " + s);
    return v;
}

double FlatConfig::get_double_or(const std::string& key, double def) const {
    return has(key) ? get_double(key) : def;
}

std::int64_t FlatConfig::get_int(const std::string& key) const {
    std::string s = require(key);
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw ConfigError("config key " + key + ": not an integer: " + s);
    return v;
}

std::int64_t FlatConfig::get_int_or(const std::string& key, std::int64_t def) const {
    return has(key) ? get_int(key) : def;
}

std::uint64_t FlatConfig::get_u64_or(const std::string& key, std::uint64_t def) const {
    if (!has(key)) return def;
    std::string s = require(key);
    char* end = nullptr;
    unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw ConfigError("config key " + key + ": not an unsigned integer: " + s);
    return v;
}

bool FlatConfig::get_bool_or(const std::string& key, bool def) const {
    if (!has(key)) return def;
    std::string s = require(key);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("config key " + key + ": not a boolean: " + s);
}

void FlatConfig::apply_overrides(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0)
            throw ConfigError("expected --key value override, got: " + a);
        std::string key = a.substr(2);
        std::string value;
        std::size_t eq = key.find('=');
        if (eq != std::string::npos) {
            value = key.substr(eq + 1);
            key = key.substr(0, eq);
        } else {
            if (i + 1 >= args.size()) throw ConfigError("override missing value: " + a);
            value = args[++i];
        }
        if (key.empty()) throw ConfigError("override with empty key");
        kv_[key] = value;
    }
}

std::string FlatConfig::content_hash() const {
    std::string s = serialize();
    std::uint64_t h = fnv1a64(s.data(), s.size());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace finray
