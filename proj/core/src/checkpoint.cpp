#include "finray/checkpoint.hpp"

#include <bit>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "finray/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint container assumes a little-endian host");

namespace finray {

std::size_t Blob::numel() const {
    std::size_t n = 1;
    for (std::uint32_t d : dims) n *= d;
    return n;
}

void Checkpoint::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("checkpoint save: cannot open " + path);
    f << "FTCKPT1\n";
    f << "arch " << arch << "\n";
    f << "head " << head << "\n";
    f << "hyper " << hyper.size() << "\n";
    for (const auto& [k, v] : hyper) f << k << " " << v << "\n";
    f << "blobs " << blobs.size() << "\n";
    for (const Blob& b : blobs) {
        if (b.data.size() != b.numel())
            throw InvalidArgument("checkpoint save: blob data does not match dims");
        const std::uint32_t ndim = static_cast<std::uint32_t>(b.dims.size());
        f.write(reinterpret_cast<const char*>(&ndim), sizeof(ndim));
        f.write(reinterpret_cast<const char*>(b.dims.data()),
                static_cast<std::streamsize>(b.dims.size() * sizeof(std::uint32_t)));
        f.write(reinterpret_cast<const char*>(b.data.data()),
                static_cast<std::streamsize>(b.data.size() * sizeof(double)));
    }
    if (!f) throw DataError("checkpoint save: write failed for " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("checkpoint load: cannot open " + path);
    std::string line;
    auto next_line = [&](const char* what) {
        if (!std::getline(f, line))
            throw DataError(std::string("checkpoint load: truncated header (") + what + ") in " +
                            path);
        return line;
    };
    if (next_line("magic") != "FTCKPT1")
        throw DataError("checkpoint load: bad magic in " + path);

    Checkpoint ck;
    {
        std::istringstream in(next_line("arch"));
        std::string tag;
        if (!(in >> tag >> ck.arch) || tag != "arch")
            throw DataError("checkpoint load: bad arch line in " + path);
    }
    {
        std::istringstream in(next_line("head"));
        std::string tag;
        if (!(in >> tag >> ck.head) || tag != "head")
            throw DataError("checkpoint load: bad head line in " + path);
    }
    std::size_t hyper_count = 0;
    {
        std::istringstream in(next_line("hyper"));
        std::string tag;
        if (!(in >> tag >> hyper_count) || tag != "hyper")
            throw DataError("checkpoint load: bad hyper line in " + path);
    }
    for (std::size_t i = 0; i < hyper_count; ++i) {
        std::istringstream in(next_line("hyper entry"));
        std::string k, v;
        if (!(in >> k >> v)) throw DataError("checkpoint load: bad hyper entry in " + path);
        ck.hyper[k] = v;
    }
    std::size_t blob_count = 0;
    {
        std::istringstream in(next_line("blobs"));
        std::string tag;
        if (!(in >> tag >> blob_count) || tag != "blobs")
            throw DataError("checkpoint load: bad blobs line in " + path);
    }
    for (std::size_t i = 0; i < blob_count; ++i) {
        Blob b;
        std::uint32_t ndim = 0;
        f.read(reinterpret_cast<char*>(&ndim), sizeof(ndim));
        if (!f || ndim > 8) throw DataError("checkpoint load: corrupt blob header in " + path);
        b.dims.resize(ndim);
        f.read(reinterpret_cast<char*>(b.dims.data()),
               static_cast<std::streamsize>(ndim * sizeof(std::uint32_t)));
        if (!f) throw DataError("checkpoint load: corrupt blob dims in " + path);
        b.data.resize(b.numel());
        f.read(reinterpret_cast<char*>(b.data.data()),
               static_cast<std::streamsize>(b.data.size() * sizeof(double)));
        if (!f) throw DataError("checkpoint load: truncated blob data in " + path);
        ck.blobs.push_back(std::move(b));
    }
    return ck;
}

double Checkpoint::hyper_double(const std::string& key, double def) const {
    auto it = hyper.find(key);
    if (it == hyper.end()) return def;
    return std::strtod(it->second.c_str(), nullptr);
}

std::string Checkpoint::hyper_str(const std::string& key, const std::string& def) const {
    auto it = hyper.find(key);
    return it == hyper.end() ? def : it->second;
}

} // namespace finray
