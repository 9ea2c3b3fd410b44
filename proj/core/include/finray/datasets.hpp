#pragma once

#include <cstdint>
#include <string>

#include "finray/manifest.hpp"
#include "finray/simgel.hpp"

namespace finray {

struct GenerateOptions {
    double noise_std = 0.01;
    bool write_raw = false; // FTIMG1 sidecars next to the PNGs
    SimgelParams params = SimgelParams::defaults();
};

// Renders n_per_class images for each of the four nut classes with position
// uniform in [10,50] mm, angle uniform in [0,360) deg and force uniform in
// [5,25] N. Writes PNGs plus manifest.jsonl under out_dir; bit-reproducible
// for a fixed seed.
DatasetManifest generate_classification_dataset(int n_per_class, std::uint64_t seed,
                                                const std::string& out_dir,
                                                const GenerateOptions& opts = {});

// Renders n_per_indenter images for cylinder and cuboid indenters on a
// jittered grid covering [10,50] mm x [0,25] N.
DatasetManifest generate_regression_dataset(int n_per_indenter, std::uint64_t seed,
                                            const std::string& out_dir,
                                            const GenerateOptions& opts = {});

} // namespace finray
