#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vidshield/error.hpp"
#include "vidshield/frame.hpp"

namespace vidshield {

// Uncompressed container I/O. Reading understands YUV4MPEG2 with C444 or
// C420jpeg chroma (a missing C tag means C420jpeg, the historical default);
// writing always emits C444 so that write -> parse is the identity on pixels
// and parse -> write is the identity on bytes for files this module produced.
//
// Color conversion is BT.601 full range, rounded half away from zero and
// clamped to [0,255]. C420jpeg chroma is upsampled by replicating each chroma
// sample over its 2x2 block.

VideoClip parse_y4m(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> write_y4m(const VideoClip& clip);

// PPM P6, maxval 255 only. write emits the canonical header
// "P6\n<w> <h>\n255\n"; parse additionally accepts '#' comments and arbitrary
// whitespace runs between header fields.
Image parse_ppm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> write_ppm(const Image& image);

// Nearest-neighbor rescale; aspect ratio is not preserved.
// Source index per axis: floor(dst * src_dim / dst_dim).
Frame fit_image(const Image& image, std::uint32_t width, std::uint32_t height);

// Pointwise BT.601 full-range conversion on one pixel, both directions.
// Exposed so tests and the corpus generator can reason about the exact
// quantization the container round trip applies.
std::array<std::uint8_t, 3> rgb_to_yuv(std::uint8_t r, std::uint8_t g, std::uint8_t b);
std::array<std::uint8_t, 3> yuv_to_rgb(std::uint8_t y, std::uint8_t u, std::uint8_t v);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace vidshield
