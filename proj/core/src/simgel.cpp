#include "finray/simgel.hpp"

#include <algorithm>
#include <cmath>

#include "finray/config.hpp"
#include "finray/errors.hpp"
#include "finray/rng.hpp"

namespace finray {

const char* nut_class_name(NutClass c) {
    switch (c) {
        case NutClass::Almond: return "almond";
        case NutClass::BrazilNut: return "brazil_nut";
        case NutClass::Pecan: return "pecan";
        case NutClass::Walnut: return "walnut";
    }
    return "?";
}

NutClass nut_class_from_name(const std::string& name) {
    if (name == "almond") return NutClass::Almond;
    if (name == "brazil_nut") return NutClass::BrazilNut;
    if (name == "pecan") return NutClass::Pecan;
    if (name == "walnut") return NutClass::Walnut;
    throw InvalidArgument("unknown nut class: " + name);
}

IndenterSpec IndenterSpec::cylinder(double size_mm) {
    return {IndenterKind::Cylinder, size_mm, NutClass::Almond, 0};
}

IndenterSpec IndenterSpec::cuboid(double size_mm) {
    return {IndenterKind::Cuboid, size_mm, NutClass::Almond, 0};
}

IndenterSpec IndenterSpec::nut_texture(NutClass c, std::uint64_t texture_seed, double size_mm) {
    IndenterSpec s;
    s.kind = IndenterKind::NutTexture;
    s.nut = c;
    s.texture_seed = texture_seed;
    s.size_mm = size_mm > 0.0 ? size_mm : SimgelParams::defaults().nut_size_mm[static_cast<int>(c)];
    return s;
}

double SimgelParams::d_max(IndenterKind k) const {
    switch (k) {
        case IndenterKind::Cylinder: return cyl_d_max_mm;
        case IndenterKind::Cuboid: return cub_d_max_mm;
        case IndenterKind::NutTexture: return nut_d_max_mm;
    }
    return cyl_d_max_mm;
}

double SimgelParams::k_n(IndenterKind k) const {
    switch (k) {
        case IndenterKind::Cylinder: return cyl_k_n;
        case IndenterKind::Cuboid: return cub_k_n;
        case IndenterKind::NutTexture: return nut_k_n;
    }
    return cyl_k_n;
}

const SimgelParams& SimgelParams::defaults() {
    static const SimgelParams p;
    return p;
}

namespace {
const char* kNutKeys[4] = {"almond", "brazil_nut", "pecan", "walnut"};
}

void SimgelParams::save(const std::string& path) const {
    FlatConfig c;
    c.set_int("table.version", version);
    c.set_int("canvas.h", canvas_h);
    c.set_int("canvas.w", canvas_w);
    c.set_double("canvas.resolution_mm_per_px", resolution_mm_per_px);
    c.set_double("canvas.origin_mm", origin_mm);
    c.set_double("membrane.blur_sigma_px", blur_sigma_px);
    c.set_double("membrane.imprint_thresh_mm", imprint_thresh_mm);
    c.set_double("shading.ambient", ambient);
    c.set_double("shading.light_gain", light_gain);
    c.set_double("shading.light_elevation_deg", light_elevation_deg);
    for (int i = 0; i < 3; ++i)
        c.set_double("shading.light_azimuth_deg_" + std::to_string(i), light_azimuth_deg[i]);
    c.set_double("compliance.cylinder_d_max_mm", cyl_d_max_mm);
    c.set_double("compliance.cylinder_k_n", cyl_k_n);
    c.set_double("compliance.cuboid_d_max_mm", cub_d_max_mm);
    c.set_double("compliance.cuboid_k_n", cub_k_n);
    c.set_double("compliance.nut_d_max_mm", nut_d_max_mm);
    c.set_double("compliance.nut_k_n", nut_k_n);
    for (int i = 0; i < 4; ++i) {
        std::string pfx = std::string("texture.") + kNutKeys[i] + "_";
        c.set_double(pfx + "size_mm", nut_size_mm[i]);
        c.set_double(pfx + "half_len", nut_half_len[i]);
        c.set_double(pfx + "half_wid", nut_half_wid[i]);
        c.set_double(pfx + "dome_mm", nut_dome_mm[i]);
    }
    c.set_double("texture.almond_stria_amp_mm", almond_stria_amp_mm);
    c.set_double("texture.almond_stria_wavelen_mm", almond_stria_wavelen_mm);
    c.set_double("texture.brazil_ridge_sharp", brazil_ridge_sharp);
    c.set_double("texture.brazil_facet_cuts", brazil_facet_cuts);
    c.set_double("texture.brazil_facet_depth_mm", brazil_facet_depth_mm);
    c.set_double("texture.pecan_groove_depth_mm", pecan_groove_depth_mm);
    c.set_double("texture.pecan_groove_sigma_mm", pecan_groove_sigma_mm);
    c.set_double("texture.pecan_groove_offset", pecan_groove_offset);
    c.set_double("texture.walnut_ridge_amp_mm", walnut_ridge_amp_mm);
    c.set_double("texture.walnut_ridge_wavelen_mm", walnut_ridge_wavelen_mm);
    c.set_double("texture.walnut_octaves", walnut_octaves);
    c.set_double("noise.default_std", default_noise_std);
    c.save(path);
}

SimgelParams SimgelParams::load(const std::string& path) {
    FlatConfig c = FlatConfig::parse_file(path);
    SimgelParams p;
    int version = static_cast<int>(c.get_int_or("table.version", -1));
    if (version != 1)
        throw ConfigError("simgel parameter table " + path + ": unsupported version " +
                          std::to_string(version));
    p.version = version;
    p.canvas_h = static_cast<int>(c.get_int_or("canvas.h", p.canvas_h));
    p.canvas_w = static_cast<int>(c.get_int_or("canvas.w", p.canvas_w));
    p.resolution_mm_per_px = c.get_double_or("canvas.resolution_mm_per_px", p.resolution_mm_per_px);
    p.origin_mm = c.get_double_or("canvas.origin_mm", p.origin_mm);
    p.blur_sigma_px = c.get_double_or("membrane.blur_sigma_px", p.blur_sigma_px);
    p.imprint_thresh_mm = c.get_double_or("membrane.imprint_thresh_mm", p.imprint_thresh_mm);
    p.ambient = c.get_double_or("shading.ambient", p.ambient);
    p.light_gain = c.get_double_or("shading.light_gain", p.light_gain);
    p.light_elevation_deg = c.get_double_or("shading.light_elevation_deg", p.light_elevation_deg);
    for (int i = 0; i < 3; ++i)
        p.light_azimuth_deg[i] =
            c.get_double_or("shading.light_azimuth_deg_" + std::to_string(i), p.light_azimuth_deg[i]);
    p.cyl_d_max_mm = c.get_double_or("compliance.cylinder_d_max_mm", p.cyl_d_max_mm);
    p.cyl_k_n = c.get_double_or("compliance.cylinder_k_n", p.cyl_k_n);
    p.cub_d_max_mm = c.get_double_or("compliance.cuboid_d_max_mm", p.cub_d_max_mm);
    p.cub_k_n = c.get_double_or("compliance.cuboid_k_n", p.cub_k_n);
    p.nut_d_max_mm = c.get_double_or("compliance.nut_d_max_mm", p.nut_d_max_mm);
    p.nut_k_n = c.get_double_or("compliance.nut_k_n", p.nut_k_n);
    for (int i = 0; i < 4; ++i) {
        std::string pfx = std::string("texture.") + kNutKeys[i] + "_";
        p.nut_size_mm[i] = c.get_double_or(pfx + "size_mm", p.nut_size_mm[i]);
        p.nut_half_len[i] = c.get_double_or(pfx + "half_len", p.nut_half_len[i]);
        p.nut_half_wid[i] = c.get_double_or(pfx + "half_wid", p.nut_half_wid[i]);
        p.nut_dome_mm[i] = c.get_double_or(pfx + "dome_mm", p.nut_dome_mm[i]);
    }
    p.almond_stria_amp_mm = c.get_double_or("texture.almond_stria_amp_mm", p.almond_stria_amp_mm);
    p.almond_stria_wavelen_mm =
        c.get_double_or("texture.almond_stria_wavelen_mm", p.almond_stria_wavelen_mm);
    p.brazil_ridge_sharp = c.get_double_or("texture.brazil_ridge_sharp", p.brazil_ridge_sharp);
    p.brazil_facet_cuts = c.get_double_or("texture.brazil_facet_cuts", p.brazil_facet_cuts);
    p.brazil_facet_depth_mm =
        c.get_double_or("texture.brazil_facet_depth_mm", p.brazil_facet_depth_mm);
    p.pecan_groove_depth_mm =
        c.get_double_or("texture.pecan_groove_depth_mm", p.pecan_groove_depth_mm);
    p.pecan_groove_sigma_mm =
        c.get_double_or("texture.pecan_groove_sigma_mm", p.pecan_groove_sigma_mm);
    p.pecan_groove_offset = c.get_double_or("texture.pecan_groove_offset", p.pecan_groove_offset);
    p.walnut_ridge_amp_mm = c.get_double_or("texture.walnut_ridge_amp_mm", p.walnut_ridge_amp_mm);
    p.walnut_ridge_wavelen_mm =
        c.get_double_or("texture.walnut_ridge_wavelen_mm", p.walnut_ridge_wavelen_mm);
    p.walnut_octaves = c.get_double_or("texture.walnut_octaves", p.walnut_octaves);
    p.default_noise_std = c.get_double_or("noise.default_std", p.default_noise_std);
    return p;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Hash-lattice value noise in [0,1]; pure function of (seed, x, y).
double lattice(std::uint64_t seed, std::int64_t ix, std::int64_t iy) {
    std::uint64_t h = seed;
    h ^= static_cast<std::uint64_t>(ix) * 0x9e3779b97f4a7c15ull;
    h ^= static_cast<std::uint64_t>(iy) * 0xc2b2ae3d27d4eb4full;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
    h ^= h >> 31;
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double value_noise(std::uint64_t seed, double x, double y) {
    double fx = std::floor(x), fy = std::floor(y);
    auto ix = static_cast<std::int64_t>(fx);
    auto iy = static_cast<std::int64_t>(fy);
    double tx = smoothstep(x - fx), ty = smoothstep(y - fy);
    double v00 = lattice(seed, ix, iy), v10 = lattice(seed, ix + 1, iy);
    double v01 = lattice(seed, ix, iy + 1), v11 = lattice(seed, ix + 1, iy + 1);
    double a = v00 + (v10 - v00) * tx;
    double b = v01 + (v11 - v01) * tx;
    return a + (b - a) * ty;
}

// Ridged multi-octave noise in [0,1]: sharp crests where the underlying
// noise crosses 0.5.
double ridge_noise(std::uint64_t seed, double x, double y, int octaves) {
    double sum = 0.0, amp = 1.0, norm = 0.0, freq = 1.0;
    for (int o = 0; o < octaves; ++o) {
        double v = value_noise(seed + static_cast<std::uint64_t>(o) * 1315423911ull, x * freq, y * freq);
        sum += amp * (1.0 - 2.0 * std::abs(v - 0.5));
        norm += amp;
        amp *= 0.55;
        freq *= 2.1;
    }
    return sum / norm;
}

struct NutGeom {
    double a, b;   // footprint semi-axes, mm
    double dome;   // dome height, mm
};

NutGeom nut_geom(const IndenterSpec& spec, const SimgelParams& p) {
    int ci = static_cast<int>(spec.nut);
    double s = spec.size_mm;
    return {p.nut_half_len[ci] * s, p.nut_half_wid[ci] * s, p.nut_dome_mm[ci]};
}

double nut_height(const IndenterSpec& spec, const SimgelParams& p, double x, double y) {
    const NutGeom g = nut_geom(spec, p);
    const double e = (x * x) / (g.a * g.a) + (y * y) / (g.b * g.b);
    if (e >= 1.0) return 0.0;
    const double mask = 1.0 - e;
    const double dome = g.dome * std::sqrt(mask);
    const std::uint64_t seed = spec.texture_seed * 0x2545f4914f6cdd1dull + 0x9e3779b97f4a7c15ull +
                               static_cast<std::uint64_t>(spec.nut) * 0x94d049bb133111ebull;

    switch (spec.nut) {
        case NutClass::Almond: {
            // fine parallel striations along the major axis
            double phase = 2.0 * kPi * lattice(seed, 1, 1);
            double stria = p.almond_stria_amp_mm *
                           std::sin(2.0 * kPi * x / p.almond_stria_wavelen_mm + phase);
            return std::max(0.0, dome + stria * mask);
        }
        case NutClass::BrazilNut: {
            // sharp longitudinal ridge with planar flanks, then a few
            // seeded planar facet cuts
            double h = g.dome * (1.0 - std::pow(std::abs(y) / g.b, p.brazil_ridge_sharp)) *
                       (1.0 - 0.5 * (x * x) / (g.a * g.a));
            int cuts = static_cast<int>(p.brazil_facet_cuts);
            for (int i = 0; i < cuts; ++i) {
                double ang = 2.0 * kPi * lattice(seed, 10 + i, 3);
                double off = 0.15 * g.a + 0.6 * g.a * lattice(seed, 10 + i, 7);
                double plane = g.dome - p.brazil_facet_depth_mm *
                                            (std::cos(ang) * x + std::sin(ang) * y - off) / g.a;
                h = std::min(h, plane);
            }
            return std::max(0.0, h);
        }
        case NutClass::Pecan: {
            // smooth shell with two deep longitudinal grooves
            double h = dome;
            double yg = p.pecan_groove_offset * g.b;
            for (double gy : {-yg, yg}) {
                double d = (y - gy) / p.pecan_groove_sigma_mm;
                h -= p.pecan_groove_depth_mm * mask * std::exp(-0.5 * d * d);
            }
            return std::max(0.0, h);
        }
        case NutClass::Walnut: {
            // high-frequency convoluted ridges over the whole shell
            double n = ridge_noise(seed, x / p.walnut_ridge_wavelen_mm,
                                   y / p.walnut_ridge_wavelen_mm,
                                   static_cast<int>(p.walnut_octaves));
            return std::max(0.0, dome + p.walnut_ridge_amp_mm * (n - 0.5) * 2.0 * mask);
        }
    }
    return 0.0;
}

} // namespace

Heightmap make_indenter(const IndenterSpec& spec, double resolution_mm_per_px,
                        const SimgelParams& params) {
    if (spec.size_mm <= 0.0) throw InvalidArgument("make_indenter: size_mm must be positive");
    if (resolution_mm_per_px <= 0.0)
        throw InvalidArgument("make_indenter: resolution must be positive");
    const double res = resolution_mm_per_px;

    double half_x = 0.0, half_y = 0.0;
    switch (spec.kind) {
        case IndenterKind::Cylinder:
            half_x = 1.1 * spec.size_mm; // axis runs along local x
            half_y = 0.5 * spec.size_mm;
            break;
        case IndenterKind::Cuboid:
            half_x = half_y = 0.5 * spec.size_mm;
            break;
        case IndenterKind::NutTexture: {
            NutGeom g = nut_geom(spec, params);
            half_x = g.a;
            half_y = g.b;
            break;
        }
    }

    const int cols = std::max(8, 2 * static_cast<int>(std::ceil(half_x / res)) + 3);
    const int rows = std::max(8, 2 * static_cast<int>(std::ceil(half_y / res)) + 3);
    Heightmap hm(rows, cols, res);
    const double cx = 0.5 * (cols - 1), cy = 0.5 * (rows - 1);

    for (int r = 0; r < rows; ++r) {
        const double y = (r - cy) * res;
        for (int c = 0; c < cols; ++c) {
            const double x = (c - cx) * res;
            double h = 0.0;
            switch (spec.kind) {
                case IndenterKind::Cylinder: {
                    const double radius = 0.5 * spec.size_mm;
                    if (std::abs(y) <= radius && std::abs(x) <= half_x)
                        h = std::sqrt(radius * radius - y * y);
                    break;
                }
                case IndenterKind::Cuboid:
                    if (std::abs(x) <= half_x && std::abs(y) <= half_y) h = 0.5 * spec.size_mm;
                    break;
                case IndenterKind::NutTexture:
                    h = nut_height(spec, params, x, y);
                    break;
            }
            hm.at(r, c) = h;
        }
    }
    return hm;
}

double indentation_depth(double force_n, const IndenterSpec& spec, const SimgelParams& params) {
    if (force_n < 0.0) throw InvalidArgument("indentation_depth: force must be nonnegative");
    const double d_max = params.d_max(spec.kind);
    const double k = params.k_n(spec.kind);
    return d_max * force_n / (force_n + k);
}

namespace {

void gaussian_blur_inplace(Heightmap& hm, double sigma_px) {
    if (sigma_px <= 0.0) return;
    const int radius = static_cast<int>(std::ceil(3.0 * sigma_px));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma_px * sigma_px));
        sum += kernel[i + radius];
    }
    for (double& k : kernel) k /= sum;

    Heightmap tmp(hm.rows, hm.cols, hm.resolution_mm_per_px);
    for (int r = 0; r < hm.rows; ++r)
        for (int c = 0; c < hm.cols; ++c) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                int cc = c + i;
                if (cc < 0 || cc >= hm.cols) continue;
                acc += kernel[i + radius] * hm.at(r, cc);
            }
            tmp.at(r, c) = acc;
        }
    for (int r = 0; r < hm.rows; ++r)
        for (int c = 0; c < hm.cols; ++c) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                int rr = r + i;
                if (rr < 0 || rr >= hm.rows) continue;
                acc += kernel[i + radius] * tmp.at(rr, c);
            }
            hm.at(r, c) = acc;
        }
}

double sample_bilinear(const Heightmap& hm, double r, double c) {
    if (r < 0 || c < 0 || r > hm.rows - 1 || c > hm.cols - 1) return 0.0;
    int r0 = static_cast<int>(std::floor(r)), c0 = static_cast<int>(std::floor(c));
    int r1 = std::min(r0 + 1, hm.rows - 1), c1 = std::min(c0 + 1, hm.cols - 1);
    double tr = r - r0, tc = c - c0;
    double v0 = hm.at(r0, c0) + (hm.at(r0, c1) - hm.at(r0, c0)) * tc;
    double v1 = hm.at(r1, c0) + (hm.at(r1, c1) - hm.at(r1, c0)) * tc;
    return v0 + (v1 - v0) * tr;
}

} // namespace

Heightmap deform_membrane(const Heightmap& indenter, const ContactState& contact, double depth_mm,
                          const SimgelParams& params) {
    if (depth_mm < 0.0) throw InvalidArgument("deform_membrane: depth must be nonnegative");
    const double res = params.resolution_mm_per_px;
    Heightmap out(params.canvas_h, params.canvas_w, res);
    if (depth_mm == 0.0) return out;

    double peak = 0.0;
    for (double v : indenter.h) peak = std::max(peak, v);

    const double theta = contact.angle_deg * kPi / 180.0;
    const double ct = std::cos(theta), st = std::sin(theta);
    const double icx = 0.5 * (indenter.cols - 1), icy = 0.5 * (indenter.rows - 1);
    const double ires = indenter.resolution_mm_per_px;

    for (int r = 0; r < out.rows; ++r) {
        const double y = params.origin_mm + r * res - contact.position_mm;
        for (int c = 0; c < out.cols; ++c) {
            const double x = (c - 0.5 * (out.cols - 1)) * res - contact.lateral_offset_mm;
            // rotate world offset into the indenter frame
            const double lx = ct * x + st * y;
            const double ly = -st * x + ct * y;
            const double h = sample_bilinear(indenter, icy + ly / ires, icx + lx / ires);
            out.at(r, c) = std::max(0.0, h - (peak - depth_mm));
        }
    }
    gaussian_blur_inplace(out, params.blur_sigma_px);
    return out;
}

TactileImage shade(const Heightmap& deformed, const SimgelParams& params) {
    for (double v : deformed.h)
        if (!std::isfinite(v)) throw InvalidArgument("shade: heightmap contains non-finite values");
    const int rows = deformed.rows, cols = deformed.cols;
    const double res = deformed.resolution_mm_per_px;
    TactileImage img(rows, cols);

    const double el = params.light_elevation_deg * kPi / 180.0;
    const double sin_el = std::sin(el), cos_el = std::cos(el);
    double lx[3], ly[3], lz[3];
    for (int i = 0; i < 3; ++i) {
        const double az = params.light_azimuth_deg[i] * kPi / 180.0;
        lx[i] = std::cos(az) * cos_el;
        ly[i] = std::sin(az) * cos_el;
        lz[i] = sin_el;
    }

    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int cm = std::max(0, c - 1), cp = std::min(cols - 1, c + 1);
            const int rm = std::max(0, r - 1), rp = std::min(rows - 1, r + 1);
            const double gx = (deformed.at(r, cp) - deformed.at(r, cm)) / ((cp - cm) * res);
            const double gy = (deformed.at(rp, c) - deformed.at(rm, c)) / ((rp - rm) * res);
            const double inv_n = 1.0 / std::sqrt(gx * gx + gy * gy + 1.0);
            const double nx = -gx * inv_n, ny = -gy * inv_n, nz = inv_n;
            for (int ch = 0; ch < 3; ++ch) {
                const double lambert = std::max(0.0, nx * lx[ch] + ny * ly[ch] + nz * lz[ch]);
                const double v = params.ambient + params.light_gain * (lambert - sin_el);
                img.at(r, c, ch) = std::clamp(v, 0.0, 1.0);
            }
        }
    }
    return img;
}

TactileImage render(const ContactState& contact, const IndenterSpec& spec, double noise_std,
                    std::uint64_t seed, const SimgelParams& params) {
    if (noise_std < 0.0) throw InvalidArgument("render: noise_std must be nonnegative");
    const Heightmap ind = make_indenter(spec, params.resolution_mm_per_px, params);
    const double depth = indentation_depth(contact.force_n, spec, params);
    const Heightmap deformed = deform_membrane(ind, contact, depth, params);
    TactileImage img = shade(deformed, params);
    if (noise_std > 0.0) {
        Rng rng(seed);
        for (double& v : img.px) v = std::clamp(v + rng.normal(0.0, noise_std), 0.0, 1.0);
    }
    img.meta.seed = seed;
    img.meta.synthetic = true;
    img.meta.position_mm = contact.position_mm;
    img.meta.force_n = contact.force_n;
    return img;
}

int imprint_area(const Heightmap& deformed, double thresh_mm) {
    int count = 0;
    for (double v : deformed.h)
        if (v > thresh_mm) ++count;
    return count;
}

std::pair<double, double> imprint_centroid(const Heightmap& deformed, double thresh_mm) {
    double sr = 0.0, sc = 0.0;
    int count = 0;
    for (int r = 0; r < deformed.rows; ++r)
        for (int c = 0; c < deformed.cols; ++c)
            if (deformed.at(r, c) > thresh_mm) {
                sr += r;
                sc += c;
                ++count;
            }
    if (count == 0) return {-1.0, -1.0};
    return {sr / count, sc / count};
}

} // namespace finray
