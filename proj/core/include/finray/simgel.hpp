#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "finray/image.hpp"

namespace finray {

enum class IndenterKind { Cylinder, Cuboid, NutTexture };
enum class NutClass { Almond, BrazilNut, Pecan, Walnut };

constexpr int kNumNutClasses = 4;

const char* nut_class_name(NutClass c);
NutClass nut_class_from_name(const std::string& name);

struct IndenterSpec {
    IndenterKind kind = IndenterKind::Cylinder;
    double size_mm = 10.0;
    NutClass nut = NutClass::Almond;   // NutTexture only
    std::uint64_t texture_seed = 0;    // NutTexture only

    static IndenterSpec cylinder(double size_mm);
    static IndenterSpec cuboid(double size_mm);
    static IndenterSpec nut_texture(NutClass c, std::uint64_t texture_seed, double size_mm = 0.0);
};

// Ground-truth contact description. position_mm runs along the finger length.
struct ContactState {
    double position_mm = 30.0;
    double lateral_offset_mm = 0.0;
    double angle_deg = 0.0;
    double force_n = 10.0;
};

// Versioned parameter table: gel compliance, canvas geometry, lighting and
// the per-class procedural texture constants. Version 1 values are compiled
// in; the same table ships as configs/simgel_params_v1.cfg.
struct SimgelParams {
    int version = 1;

    // canvas
    int canvas_h = 160;
    int canvas_w = 120;
    double resolution_mm_per_px = 0.33;
    double origin_mm = 3.6; // world position of canvas row 0 along the finger

    // membrane
    double blur_sigma_px = 1.6;
    double imprint_thresh_mm = 0.05;

    // shading
    double ambient = 0.35;
    double light_gain = 0.85;
    double light_elevation_deg = 45.0;
    double light_azimuth_deg[3] = {0.0, 120.0, 240.0};

    // compliance d(F) = d_max * F / (F + k), per indenter kind
    double cyl_d_max_mm = 2.5, cyl_k_n = 10.0;
    double cub_d_max_mm = 2.2, cub_k_n = 12.0;
    double nut_d_max_mm = 2.8, nut_k_n = 8.0;

    // nut footprints (fractions of size_mm) and relief parameters (mm)
    double nut_size_mm[4] = {12.0, 15.0, 13.0, 14.0};
    double nut_half_len[4] = {0.50, 0.50, 0.50, 0.50};
    double nut_half_wid[4] = {0.30, 0.42, 0.40, 0.46};
    double nut_dome_mm[4] = {3.0, 3.2, 3.0, 3.0};
    double almond_stria_amp_mm = 0.22;
    double almond_stria_wavelen_mm = 0.9;
    double brazil_ridge_sharp = 1.0;
    double brazil_facet_cuts = 3.0;
    double brazil_facet_depth_mm = 0.9;
    double pecan_groove_depth_mm = 0.9;
    double pecan_groove_sigma_mm = 0.7;
    double pecan_groove_offset = 0.45; // fraction of half width
    double walnut_ridge_amp_mm = 0.5;
    double walnut_ridge_wavelen_mm = 1.4;
    double walnut_octaves = 2.0;

    double default_noise_std = 0.01;

    double d_max(IndenterKind k) const;
    double k_n(IndenterKind k) const;

    static const SimgelParams& defaults();
    static SimgelParams load(const std::string& path);
    void save(const std::string& path) const;
};

// Rasterizes the indenter relief on its own local grid. Deterministic for a
// fixed (spec, resolution); nut textures are procedural from texture_seed.
Heightmap make_indenter(const IndenterSpec& spec, double resolution_mm_per_px,
                        const SimgelParams& params = SimgelParams::defaults());

// Saturating compliance law; strictly increasing, depth(0) = 0.
double indentation_depth(double force_n, const IndenterSpec& spec,
                         const SimgelParams& params = SimgelParams::defaults());

// Presses the indenter into the gel at the given contact pose and depth:
// pointwise max against the zero plane, then Gaussian smoothing.
Heightmap deform_membrane(const Heightmap& indenter, const ContactState& contact,
                          double depth_mm,
                          const SimgelParams& params = SimgelParams::defaults());

// Lambertian shading under three directional colored lights; a flat
// heightmap renders the uniform ambient background.
TactileImage shade(const Heightmap& deformed,
                   const SimgelParams& params = SimgelParams::defaults());

// Full pipeline plus seeded additive Gaussian pixel noise.
TactileImage render(const ContactState& contact, const IndenterSpec& spec,
                    double noise_std, std::uint64_t seed,
                    const SimgelParams& params = SimgelParams::defaults());

// Imprint analysis on a deformed heightmap (pixels above threshold).
int imprint_area(const Heightmap& deformed, double thresh_mm);
std::pair<double, double> imprint_centroid(const Heightmap& deformed, double thresh_mm);

} // namespace finray
