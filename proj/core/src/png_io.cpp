#include "finray/png_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "finray/errors.hpp"

namespace finray {

namespace {

const std::uint8_t kSig[8] = {137, 80, 78, 71, 13, 10, 26, 10};

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32_be(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::uint8_t* data, std::size_t n) {
    put_u32_be(out, static_cast<std::uint32_t>(n));
    std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    if (n) out.insert(out.end(), data, data + n);
    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0L, out.data() + crc_start, static_cast<uInt>(4 + n)));
    put_u32_be(out, crc);
}

int paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

} // namespace

void write_png_rgb8(const std::string& path, int h, int w, const std::vector<std::uint8_t>& rgb) {
    if (h < 1 || w < 1 || rgb.size() != static_cast<std::size_t>(h) * w * 3)
        throw InvalidArgument("write_png_rgb8: bad dimensions");

    // filter byte 0 per scanline
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(h) * (w * 3 + 1));
    for (int y = 0; y < h; ++y) {
        std::uint8_t* row = raw.data() + static_cast<std::size_t>(y) * (w * 3 + 1);
        row[0] = 0;
        std::memcpy(row + 1, rgb.data() + static_cast<std::size_t>(y) * w * 3, w * 3);
    }

    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> zdata(bound);
    if (compress2(zdata.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw DataError("write_png_rgb8: compression failed");
    zdata.resize(bound);

    std::vector<std::uint8_t> out;
    out.insert(out.end(), kSig, kSig + 8);
    std::uint8_t ihdr[13];
    ihdr[0] = static_cast<std::uint8_t>(w >> 24);
    ihdr[1] = static_cast<std::uint8_t>(w >> 16);
    ihdr[2] = static_cast<std::uint8_t>(w >> 8);
    ihdr[3] = static_cast<std::uint8_t>(w);
    ihdr[4] = static_cast<std::uint8_t>(h >> 24);
    ihdr[5] = static_cast<std::uint8_t>(h >> 16);
    ihdr[6] = static_cast<std::uint8_t>(h >> 8);
    ihdr[7] = static_cast<std::uint8_t>(h);
    ihdr[8] = 8;  // bit depth
    ihdr[9] = 2;  // RGB
    ihdr[10] = ihdr[11] = ihdr[12] = 0;
    append_chunk(out, "IHDR", ihdr, 13);
    append_chunk(out, "IDAT", zdata.data(), zdata.size());
    append_chunk(out, "IEND", nullptr, 0);

    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("write_png_rgb8: cannot open " + path);
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw DataError("write_png_rgb8: write failed for " + path);
}

namespace {

struct PngHeader {
    int w = 0, h = 0, depth = 0, color = 0, interlace = 0;
};

bool read_file(const std::string& path, std::vector<std::uint8_t>& bytes) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f) return false;
    std::streamsize n = f.tellg();
    f.seekg(0);
    bytes.resize(static_cast<std::size_t>(n));
    f.read(reinterpret_cast<char*>(bytes.data()), n);
    return static_cast<bool>(f);
}

bool parse_header(const std::vector<std::uint8_t>& bytes, PngHeader& hdr) {
    if (bytes.size() < 33 || std::memcmp(bytes.data(), kSig, 8) != 0) return false;
    if (get_u32_be(bytes.data() + 8) != 13) return false;
    if (std::memcmp(bytes.data() + 12, "IHDR", 4) != 0) return false;
    const std::uint8_t* p = bytes.data() + 16;
    hdr.w = static_cast<int>(get_u32_be(p));
    hdr.h = static_cast<int>(get_u32_be(p + 4));
    hdr.depth = p[8];
    hdr.color = p[9];
    hdr.interlace = p[12];
    return hdr.w > 0 && hdr.h > 0;
}

} // namespace

bool png_header_ok(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return false;
    std::vector<std::uint8_t> head(33);
    f.read(reinterpret_cast<char*>(head.data()), 33);
    if (!f) return false;
    PngHeader hdr;
    return parse_header(head, hdr);
}

void read_png_rgb8(const std::string& path, int& h, int& w, std::vector<std::uint8_t>& rgb) {
    std::vector<std::uint8_t> bytes;
    if (!read_file(path, bytes)) throw DataError("read_png_rgb8: cannot open " + path);
    PngHeader hdr;
    if (!parse_header(bytes, hdr)) throw DataError("read_png_rgb8: not a PNG: " + path);
    if (hdr.depth != 8 || (hdr.color != 2 && hdr.color != 6) || hdr.interlace != 0)
        throw DataError("read_png_rgb8: unsupported PNG layout in " + path);
    const int bpp = hdr.color == 2 ? 3 : 4;

    std::vector<std::uint8_t> zdata;
    std::size_t off = 8;
    while (off + 12 <= bytes.size()) {
        std::uint32_t len = get_u32_be(bytes.data() + off);
        if (off + 12 + len > bytes.size()) throw DataError("read_png_rgb8: truncated chunk in " + path);
        const char* type = reinterpret_cast<const char*>(bytes.data() + off + 4);
        if (std::memcmp(type, "IDAT", 4) == 0)
            zdata.insert(zdata.end(), bytes.begin() + off + 8, bytes.begin() + off + 8 + len);
        if (std::memcmp(type, "IEND", 4) == 0) break;
        off += 12 + len;
    }
    if (zdata.empty()) throw DataError("read_png_rgb8: no IDAT in " + path);

    const std::size_t stride = static_cast<std::size_t>(hdr.w) * bpp;
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(hdr.h) * (stride + 1));
    uLongf raw_len = static_cast<uLongf>(raw.size());
    if (uncompress(raw.data(), &raw_len, zdata.data(), static_cast<uLong>(zdata.size())) != Z_OK ||
        raw_len != raw.size())
        throw DataError("read_png_rgb8: corrupt image data in " + path);

    // undo per-row filters
    std::vector<std::uint8_t> pix(static_cast<std::size_t>(hdr.h) * stride);
    for (int y = 0; y < hdr.h; ++y) {
        const std::uint8_t* src = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
        std::uint8_t filter = src[0];
        std::uint8_t* cur = pix.data() + static_cast<std::size_t>(y) * stride;
        const std::uint8_t* up = y > 0 ? cur - stride : nullptr;
        for (std::size_t x = 0; x < stride; ++x) {
            int a = x >= static_cast<std::size_t>(bpp) ? cur[x - bpp] : 0;
            int b = up ? up[x] : 0;
            int c = (up && x >= static_cast<std::size_t>(bpp)) ? up[x - bpp] : 0;
            int v = src[1 + x];
            switch (filter) {
                case 0: break;
                case 1: v += a; break;
                case 2: v += b; break;
                case 3: v += (a + b) / 2; break;
                case 4: v += paeth(a, b, c); break;
                default: throw DataError("read_png_rgb8: bad filter byte in " + path);
            }
            cur[x] = static_cast<std::uint8_t>(v);
        }
    }

    h = hdr.h;
    w = hdr.w;
    rgb.resize(static_cast<std::size_t>(h) * w * 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c)
                rgb[(static_cast<std::size_t>(y) * w + x) * 3 + c] =
                    pix[static_cast<std::size_t>(y) * stride + x * bpp + c];
}

void save_png(const TactileImage& img, const std::string& path) {
    std::vector<std::uint8_t> rgb(img.px.size());
    for (std::size_t i = 0; i < img.px.size(); ++i) {
        double v = std::clamp(img.px[i], 0.0, 1.0);
        rgb[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    write_png_rgb8(path, img.h, img.w, rgb);
}

TactileImage load_png(const std::string& path) {
    int h = 0, w = 0;
    std::vector<std::uint8_t> rgb;
    read_png_rgb8(path, h, w, rgb);
    TactileImage img(h, w);
    for (std::size_t i = 0; i < rgb.size(); ++i) img.px[i] = rgb[i] / 255.0;
    return img;
}

} // namespace finray
