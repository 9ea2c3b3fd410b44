#include "finray/manifest.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "finray/errors.hpp"
#include "finray/png_io.hpp"
#include "finray/simgel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace finray {

const char* dataset_kind_token(DatasetKind k) {
    return k == DatasetKind::Classification ? "classification" : "regression";
}

DatasetKind dataset_kind_from_token(const std::string& t) {
    if (t == "classification") return DatasetKind::Classification;
    if (t == "regression") return DatasetKind::Regression;
    throw DataError("unknown dataset kind: " + t);
}

std::string manifest_root(const std::string& manifest_path) {
    fs::path p(manifest_path);
    return p.has_parent_path() ? p.parent_path().string() : std::string(".");
}

void save_manifest(const DatasetManifest& m, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw DataError("save_manifest: cannot open " + path);
    json header = {{"version", m.version},
                   {"kind", dataset_kind_token(m.kind)},
                   {"config_hash", m.config_hash}};
    f << header.dump() << "\n";
    for (const ManifestRecord& r : m.records) {
        json rec = {{"id", r.id},
                    {"path", r.path},
                    {"kind", dataset_kind_token(r.kind)},
                    {"split", r.split},
                    {"seed", r.seed}};
        if (r.kind == DatasetKind::Classification)
            rec["label"] = {{"class", nut_class_name(static_cast<NutClass>(r.class_label))}};
        else
            rec["label"] = {{"position_mm", r.position_mm}, {"force_n", r.force_n}};
        f << rec.dump() << "\n";
    }
    if (!f) throw DataError("save_manifest: write failed for " + path);
}

DatasetManifest load_manifest(const std::string& path, bool verify_images) {
    std::ifstream f(path);
    if (!f) throw DataError("load_manifest: cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw DataError("load_manifest: empty manifest " + path);

    DatasetManifest m;
    try {
        json header = json::parse(line);
        m.version = header.at("version").get<int>();
        if (m.version != 1)
            throw DataError("load_manifest: unsupported manifest version " +
                            std::to_string(m.version) + " in " + path);
        m.kind = dataset_kind_from_token(header.at("kind").get<std::string>());
        m.config_hash = header.value("config_hash", "");
    } catch (const json::exception& e) {
        throw DataError("load_manifest: corrupt header in " + path + ": " + e.what());
    }

    const std::string root = manifest_root(path);
    int lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        ManifestRecord r;
        try {
            json rec = json::parse(line);
            r.id = rec.at("id").get<std::int64_t>();
            r.path = rec.at("path").get<std::string>();
            r.kind = dataset_kind_from_token(rec.at("kind").get<std::string>());
            r.split = rec.value("split", "");
            r.seed = rec.at("seed").get<std::uint64_t>();
            const json& label = rec.at("label");
            if (r.kind == DatasetKind::Classification) {
                r.class_label =
                    static_cast<int>(nut_class_from_name(label.at("class").get<std::string>()));
            } else {
                r.position_mm = label.at("position_mm").get<double>();
                r.force_n = label.at("force_n").get<double>();
            }
        } catch (const json::exception& e) {
            throw DataError("load_manifest: corrupt record at " + path + ":" +
                            std::to_string(lineno) + ": " + e.what());
        }
        if (r.kind != m.kind)
            throw DataError("load_manifest: record kind mismatch at " + path + ":" +
                            std::to_string(lineno));
        if (verify_images) {
            const fs::path img = fs::path(root) / r.path;
            if (!fs::exists(img))
                throw DataError("load_manifest: missing image file " + img.string());
            if (!png_header_ok(img.string()))
                throw DataError("load_manifest: unreadable image file " + img.string());
        }
        m.records.push_back(std::move(r));
    }
    return m;
}

} // namespace finray
