#include "vidshield/video_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

namespace vidshield {
namespace {

constexpr std::uint32_t kMaxDimension = 1u << 16;
constexpr std::size_t kMaxHeaderLine = 4096;

std::uint8_t clamp_round(double v) {
  double r = std::round(v);  // half away from zero
  if (r < 0.0) return 0;
  if (r > 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

struct ByteReader {
  const std::vector<std::uint8_t>& data;
  std::size_t pos = 0;

  bool eof() const { return pos >= data.size(); }
  std::size_t remaining() const { return data.size() - pos; }
};

// Reads up to the next LF; the LF is consumed and not returned.
bool read_line(ByteReader& in, std::size_t max_len, std::string& out) {
  out.clear();
  while (!in.eof() && out.size() < max_len) {
    char c = static_cast<char>(in.data[in.pos++]);
    if (c == '\n') return true;
    out.push_back(c);
  }
  return false;
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

bool parse_u32(const std::string& text, std::uint32_t& out) {
  if (text.empty() || text.size() > 9) return false;
  std::uint64_t value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  if (value == 0 || value > kMaxDimension * 16ull) return false;
  out = static_cast<std::uint32_t>(value);
  return true;
}

enum class Colorspace { C444, C420jpeg };

}  // namespace

std::array<std::uint8_t, 3> rgb_to_yuv(std::uint8_t r8, std::uint8_t g8,
                                       std::uint8_t b8) {
  double r = r8, g = g8, b = b8;
  double y = 0.299 * r + 0.587 * g + 0.114 * b;
  double cb = 128.0 + (b - y) / 1.772;
  double cr = 128.0 + (r - y) / 1.402;
  return {clamp_round(y), clamp_round(cb), clamp_round(cr)};
}

std::array<std::uint8_t, 3> yuv_to_rgb(std::uint8_t y8, std::uint8_t u8,
                                       std::uint8_t v8) {
  double y = y8;
  double cb = u8 - 128.0;
  double cr = v8 - 128.0;
  double r = y + 1.402 * cr;
  double b = y + 1.772 * cb;
  double g = y - (0.114 * 1.772 / 0.587) * cb - (0.299 * 1.402 / 0.587) * cr;
  return {clamp_round(r), clamp_round(g), clamp_round(b)};
}

VideoClip parse_y4m(const std::vector<std::uint8_t>& bytes) {
  ByteReader in{bytes};

  std::string header;
  if (!read_line(in, kMaxHeaderLine, header)) {
    throw Error(ErrorKind::MalformedHeader, "missing stream header line");
  }
  std::vector<std::string> tokens = split_tokens(header);
  if (tokens.empty() || tokens[0] != "YUV4MPEG2") {
    throw Error(ErrorKind::MalformedHeader, "bad magic, expected YUV4MPEG2");
  }

  std::uint32_t width = 0, height = 0;
  Fps fps{0, 0};
  bool have_fps = false;
  Colorspace colorspace = Colorspace::C420jpeg;  // historical default
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const std::string& tag = tokens[i];
    const std::string value = tag.substr(1);
    switch (tag[0]) {
      case 'W':
        if (!parse_u32(value, width)) {
          throw Error(ErrorKind::MalformedHeader, "bad W tag: " + tag);
        }
        break;
      case 'H':
        if (!parse_u32(value, height)) {
          throw Error(ErrorKind::MalformedHeader, "bad H tag: " + tag);
        }
        break;
      case 'F': {
        std::size_t colon = value.find(':');
        if (colon == std::string::npos ||
            !parse_u32(value.substr(0, colon), fps.num) ||
            !parse_u32(value.substr(colon + 1), fps.den)) {
          throw Error(ErrorKind::MalformedHeader, "bad F tag: " + tag);
        }
        have_fps = true;
        break;
      }
      case 'C':
        if (value == "444") {
          colorspace = Colorspace::C444;
        } else if (value == "420jpeg") {
          colorspace = Colorspace::C420jpeg;
        } else {
          throw Error(ErrorKind::UnsupportedColorspace, "C" + value);
        }
        break;
      default:
        break;  // I, A, X: irrelevant here
    }
  }
  if (width == 0 || height == 0 || !have_fps) {
    throw Error(ErrorKind::MalformedHeader, "header must carry W, H and F");
  }
  if (width > kMaxDimension || height > kMaxDimension) {
    throw Error(ErrorKind::MalformedHeader, "dimensions out of range");
  }

  const std::size_t luma_size = static_cast<std::size_t>(width) * height;
  const std::uint32_t cw =
      colorspace == Colorspace::C444 ? width : (width + 1) / 2;
  const std::uint32_t ch =
      colorspace == Colorspace::C444 ? height : (height + 1) / 2;
  const std::size_t chroma_size = static_cast<std::size_t>(cw) * ch;

  std::vector<Frame> frames;
  while (!in.eof()) {
    std::string delimiter;
    if (!read_line(in, kMaxHeaderLine, delimiter)) {
      throw Error(ErrorKind::TruncatedFrame, "frame delimiter cut short");
    }
    if (delimiter.compare(0, 5, "FRAME") != 0 ||
        (delimiter.size() > 5 && delimiter[5] != ' ')) {
      throw Error(ErrorKind::MalformedHeader, "bad frame delimiter");
    }
    if (in.remaining() < luma_size + 2 * chroma_size) {
      throw Error(ErrorKind::TruncatedFrame,
                  "frame payload shorter than plane sizes");
    }
    const std::uint8_t* yp = bytes.data() + in.pos;
    const std::uint8_t* up = yp + luma_size;
    const std::uint8_t* vp = up + chroma_size;
    in.pos += luma_size + 2 * chroma_size;

    Frame frame(width, height);
    for (std::uint32_t y = 0; y < height; ++y) {
      for (std::uint32_t x = 0; x < width; ++x) {
        std::size_t li = static_cast<std::size_t>(y) * width + x;
        std::size_t ci = colorspace == Colorspace::C444
                             ? li
                             : static_cast<std::size_t>(y / 2) * cw + x / 2;
        auto rgb = yuv_to_rgb(yp[li], up[ci], vp[ci]);
        frame.set_rgb(x, y, rgb[0], rgb[1], rgb[2]);
      }
    }
    frames.push_back(std::move(frame));
  }
  if (frames.empty()) {
    throw Error(ErrorKind::MalformedHeader, "stream carries no frames");
  }
  return VideoClip(std::move(frames), fps);
}

std::vector<std::uint8_t> write_y4m(const VideoClip& clip) {
  char header[96];
  int n = std::snprintf(header, sizeof header, "YUV4MPEG2 W%u H%u F%u:%u Ip A1:1 C444\n",
                        clip.width(), clip.height(), clip.fps().num, clip.fps().den);

  const std::size_t plane = static_cast<std::size_t>(clip.width()) * clip.height();
  std::vector<std::uint8_t> out;
  out.reserve(n + clip.frame_count() * (6 + 3 * plane));
  out.insert(out.end(), header, header + n);

  for (const Frame& frame : clip.frames()) {
    const char* delim = "FRAME\n";
    out.insert(out.end(), delim, delim + 6);
    std::size_t base = out.size();
    out.resize(base + 3 * plane);
    std::uint8_t* yp = out.data() + base;
    std::uint8_t* up = yp + plane;
    std::uint8_t* vp = up + plane;
    const std::uint8_t* px = frame.pixels().data();
    for (std::size_t i = 0; i < plane; ++i) {
      auto yuv = rgb_to_yuv(px[3 * i], px[3 * i + 1], px[3 * i + 2]);
      yp[i] = yuv[0];
      up[i] = yuv[1];
      vp[i] = yuv[2];
    }
  }
  return out;
}

namespace {

// PPM header scanner: skips whitespace runs and '#' comments between fields.
struct PpmScanner {
  ByteReader& in;

  bool next_token(std::string& out) {
    out.clear();
    while (!in.eof()) {
      char c = static_cast<char>(in.data[in.pos]);
      if (c == '#') {
        while (!in.eof() && in.data[in.pos] != '\n') ++in.pos;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++in.pos;
      } else {
        break;
      }
    }
    while (!in.eof()) {
      char c = static_cast<char>(in.data[in.pos]);
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#') break;
      out.push_back(c);
      ++in.pos;
    }
    return !out.empty();
  }
};

}  // namespace

Image parse_ppm(const std::vector<std::uint8_t>& bytes) {
  ByteReader in{bytes};
  PpmScanner scan{in};

  std::string magic, w_text, h_text, maxval_text;
  if (!scan.next_token(magic)) {
    throw Error(ErrorKind::MalformedHeader, "empty image stream");
  }
  if (magic != "P6") {
    throw Error(ErrorKind::MalformedHeader, "bad magic, expected P6");
  }
  std::uint32_t width = 0, height = 0, maxval = 0;
  if (!scan.next_token(w_text) || !parse_u32(w_text, width) ||
      width > kMaxDimension) {
    throw Error(ErrorKind::MalformedHeader, "bad image width");
  }
  if (!scan.next_token(h_text) || !parse_u32(h_text, height) ||
      height > kMaxDimension) {
    throw Error(ErrorKind::MalformedHeader, "bad image height");
  }
  if (!scan.next_token(maxval_text) || !parse_u32(maxval_text, maxval)) {
    throw Error(ErrorKind::MalformedHeader, "bad maxval");
  }
  if (maxval != 255) {
    throw Error(ErrorKind::UnsupportedMaxval,
                "maxval " + maxval_text + ", only 255 is supported");
  }
  // Exactly one whitespace byte separates the header from the pixel data.
  if (in.eof()) {
    throw Error(ErrorKind::TruncatedPixels, "no pixel data");
  }
  ++in.pos;

  std::size_t need = static_cast<std::size_t>(width) * height * 3;
  if (in.remaining() < need) {
    throw Error(ErrorKind::TruncatedPixels, "pixel data shorter than declared size");
  }
  std::vector<std::uint8_t> pixels(bytes.begin() + in.pos,
                                   bytes.begin() + in.pos + need);
  return Image(width, height, std::move(pixels));
}

std::vector<std::uint8_t> write_ppm(const Image& image) {
  char header[64];
  int n = std::snprintf(header, sizeof header, "P6\n%u %u\n255\n", image.width(),
                        image.height());
  std::vector<std::uint8_t> out;
  out.reserve(n + image.pixels().size());
  out.insert(out.end(), header, header + n);
  out.insert(out.end(), image.pixels().begin(), image.pixels().end());
  return out;
}

Frame fit_image(const Image& image, std::uint32_t width, std::uint32_t height) {
  if (image.width() == width && image.height() == height) return image;
  Frame out(width, height);
  for (std::uint32_t y = 0; y < height; ++y) {
    std::uint32_t sy = static_cast<std::uint32_t>(
        static_cast<std::uint64_t>(y) * image.height() / height);
    for (std::uint32_t x = 0; x < width; ++x) {
      std::uint32_t sx = static_cast<std::uint32_t>(
          static_cast<std::uint64_t>(x) * image.width() / width);
      auto rgb = image.rgb(sx, sy);
      out.set_rgb(x, y, rgb[0], rgb[1], rgb[2]);
    }
  }
  return out;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::IoError, "read failed: " + path);
  return bytes;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::IoError, "write failed: " + path);
}

}  // namespace vidshield
