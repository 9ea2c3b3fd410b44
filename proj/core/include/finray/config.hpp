#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace finray {

// Flat sectioned key-value config:
//
//   # comment
//   [section]
//   key = value
//
// Keys are addressed as "section.key" ("key" alone before any section
// header). Serialization is sorted, so identical settings produce identical
// bytes.
class FlatConfig {
public:
    FlatConfig() = default;

    static FlatConfig parse_string(const std::string& text);
    static FlatConfig parse_file(const std::string& path);

    std::string serialize() const;
    void save(const std::string& path) const;

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    void set_double(const std::string& key, double v);
    void set_int(const std::string& key, std::int64_t v);
    void set_u64(const std::string& key, std::uint64_t v);

    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& def) const;
    std::string require(const std::string& key) const;

    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double def) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int_or(const std::string& key, std::int64_t def) const;
    std::uint64_t get_u64_or(const std::string& key, std::uint64_t def) const;
    bool get_bool_or(const std::string& key, bool def) const;

    // "--section.key value" pairs override file contents.
    void apply_overrides(const std::vector<std::string>& args);

    const std::map<std::string, std::string>& entries() const { return kv_; }

    // FNV-1a of the sorted serialization, as fixed-width hex.
    std::string content_hash() const;

private:
    std::map<std::string, std::string> kv_;
};

// %.17g formatting that round-trips doubles through text exactly.
std::string format_double(double v);

} // namespace finray
