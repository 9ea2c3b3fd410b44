#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace finray {

// H x W grid of heights in mm above the nominal gel plane.
struct Heightmap {
    int rows = 0;
    int cols = 0;
    double resolution_mm_per_px = 1.0;
    std::vector<double> h; // row-major

    Heightmap() = default;
    Heightmap(int r, int c, double res)
        : rows(r), cols(c), resolution_mm_per_px(res), h(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return h[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return h[static_cast<std::size_t>(r) * cols + c]; }
};

// H x W x 3 image, channels interleaved row-major, every value in [0, 1].
struct TactileImage {
    int h = 0;
    int w = 0;
    std::vector<double> px;

    struct Meta {
        std::uint64_t seed = 0;
        bool synthetic = false;
        double position_mm = 0.0;
        double force_n = 0.0;
    } meta;

    TactileImage() = default;
    TactileImage(int hh, int ww) : h(hh), w(ww), px(static_cast<std::size_t>(hh) * ww * 3, 0.0) {}

    double& at(int r, int c, int ch) { return px[(static_cast<std::size_t>(r) * w + c) * 3 + ch]; }
    double at(int r, int c, int ch) const { return px[(static_cast<std::size_t>(r) * w + c) * 3 + ch]; }
};

// Exact-area box downsampling; handles non-integer scale factors.
TactileImage downsample_area(const TactileImage& img, int out_h, int out_w);

// Mirrors columns.
TactileImage flip_lr(const TactileImage& img);

// Lossless float raw container: magic "FTIMG1", u32 H, u32 W, u32 C,
// then float32 little-endian row-major HWC data.
void save_ftimg(const TactileImage& img, const std::string& path);
TactileImage load_ftimg(const std::string& path);

} // namespace finray
