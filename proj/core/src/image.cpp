#include "finray/image.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "finray/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "raw image container assumes a little-endian host");

namespace finray {

TactileImage downsample_area(const TactileImage& img, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1) throw InvalidArgument("downsample_area: output size must be >= 1");
    TactileImage out(out_h, out_w);
    const double sy = static_cast<double>(img.h) / out_h;
    const double sx = static_cast<double>(img.w) / out_w;
    for (int oy = 0; oy < out_h; ++oy) {
        const double y0 = oy * sy, y1 = (oy + 1) * sy;
        for (int ox = 0; ox < out_w; ++ox) {
            const double x0 = ox * sx, x1 = (ox + 1) * sx;
            double acc[3] = {0, 0, 0};
            double area = 0.0;
            for (int y = static_cast<int>(std::floor(y0)); y < static_cast<int>(std::ceil(y1)); ++y) {
                const double wy = std::min<double>(y + 1, y1) - std::max<double>(y, y0);
                if (wy <= 0 || y < 0 || y >= img.h) continue;
                for (int x = static_cast<int>(std::floor(x0)); x < static_cast<int>(std::ceil(x1)); ++x) {
                    const double wx = std::min<double>(x + 1, x1) - std::max<double>(x, x0);
                    if (wx <= 0 || x < 0 || x >= img.w) continue;
                    const double w = wy * wx;
                    for (int c = 0; c < 3; ++c) acc[c] += w * img.at(y, x, c);
                    area += w;
                }
            }
            for (int c = 0; c < 3; ++c) out.at(oy, ox, c) = area > 0 ? acc[c] / area : 0.0;
        }
    }
    out.meta = img.meta;
    return out;
}

TactileImage flip_lr(const TactileImage& img) {
    TactileImage out(img.h, img.w);
    for (int r = 0; r < img.h; ++r)
        for (int c = 0; c < img.w; ++c)
            for (int ch = 0; ch < 3; ++ch) out.at(r, c, ch) = img.at(r, img.w - 1 - c, ch);
    out.meta = img.meta;
    return out;
}

namespace {
constexpr char kMagic[6] = {'F', 'T', 'I', 'M', 'G', '1'};
}

void save_ftimg(const TactileImage& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("save_ftimg: cannot open " + path);
    f.write(kMagic, 6);
    const std::uint32_t dims[3] = {static_cast<std::uint32_t>(img.h),
                                   static_cast<std::uint32_t>(img.w), 3u};
    f.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    std::vector<float> buf(img.px.size());
    for (std::size_t i = 0; i < img.px.size(); ++i) buf[i] = static_cast<float>(img.px[i]);
    f.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!f) throw DataError("save_ftimg: write failed for " + path);
}

TactileImage load_ftimg(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("load_ftimg: cannot open " + path);
    char magic[6];
    f.read(magic, 6);
    if (!f || std::memcmp(magic, kMagic, 6) != 0)
        throw DataError("load_ftimg: bad magic in " + path);
    std::uint32_t dims[3];
    f.read(reinterpret_cast<char*>(dims), sizeof(dims));
    if (!f || dims[2] != 3) throw DataError("load_ftimg: bad header in " + path);
    TactileImage img(static_cast<int>(dims[0]), static_cast<int>(dims[1]));
    std::vector<float> buf(img.px.size());
    f.read(reinterpret_cast<char*>(buf.data()),
           static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!f) throw DataError("load_ftimg: truncated data in " + path);
    for (std::size_t i = 0; i < buf.size(); ++i) img.px[i] = buf[i];
    return img;
}

} // namespace finray
