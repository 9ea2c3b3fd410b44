#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace finray {

enum class DatasetKind { Classification, Regression };

const char* dataset_kind_token(DatasetKind k);
DatasetKind dataset_kind_from_token(const std::string& t);

struct ManifestRecord {
    std::int64_t id = 0;
    std::string path; // relative to the manifest file
    DatasetKind kind = DatasetKind::Classification;
    int class_label = -1;       // classification
    double position_mm = 0.0;   // regression
    double force_n = 0.0;       // regression
    std::string split;          // "", "train" or "val"
    std::uint64_t seed = 0;

    bool operator==(const ManifestRecord&) const = default;
};

// One JSON object per line; the first line is a header with version, kind
// and the generation config hash.
struct DatasetManifest {
    int version = 1;
    DatasetKind kind = DatasetKind::Classification;
    std::string config_hash;
    std::vector<ManifestRecord> records;

    bool operator==(const DatasetManifest&) const = default;
};

void save_manifest(const DatasetManifest& m, const std::string& path);

// verify_images: checks every referenced image exists and parses (PNG
// signature + header).
DatasetManifest load_manifest(const std::string& path, bool verify_images = true);

// Directory containing the manifest; record paths resolve against it.
std::string manifest_root(const std::string& manifest_path);

} // namespace finray
