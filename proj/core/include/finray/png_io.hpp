#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "finray/image.hpp"

namespace finray {

// Minimal PNG writer/reader for 8-bit RGB(A). Writes filter-0 scanlines at a
// fixed zlib level so identical pixels produce identical bytes.
void write_png_rgb8(const std::string& path, int h, int w, const std::vector<std::uint8_t>& rgb);
void read_png_rgb8(const std::string& path, int& h, int& w, std::vector<std::uint8_t>& rgb);

// Cheap validity probe: signature + IHDR only.
bool png_header_ok(const std::string& path);

// [0,1] doubles <-> 8-bit quantization.
void save_png(const TactileImage& img, const std::string& path);
TactileImage load_png(const std::string& path);

} // namespace finray
