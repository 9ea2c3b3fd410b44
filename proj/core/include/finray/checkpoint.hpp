#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace finray {

// Serialized model container. Text header:
//
//   FTCKPT1
//   arch <token>
//   head <token>
//   hyper <count>
//   <key> <value>    (count lines, sorted)
//   blobs <count>
//
// followed by binary blobs: u32 ndim, u32 dims[ndim], f64 data (all
// little-endian).
struct Blob {
    std::vector<std::uint32_t> dims;
    std::vector<double> data;

    std::size_t numel() const;
};

struct Checkpoint {
    std::string arch;
    std::string head;
    std::map<std::string, std::string> hyper;
    std::vector<Blob> blobs;

    void save(const std::string& path) const;
    static Checkpoint load(const std::string& path);

    double hyper_double(const std::string& key, double def) const;
    std::string hyper_str(const std::string& key, const std::string& def) const;
};

} // namespace finray
