#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vidshield/rational.hpp"

namespace vidshield {

// Interleaved 8-bit RGB, row major. Dimensions are fixed at construction.
class Frame {
 public:
  Frame(std::uint32_t width, std::uint32_t height);
  Frame(std::uint32_t width, std::uint32_t height, std::vector<std::uint8_t> pixels);

  std::uint32_t width() const { return width_; }
  std::uint32_t height() const { return height_; }
  std::uint64_t pixel_count() const {
    return static_cast<std::uint64_t>(width_) * height_;
  }

  const std::vector<std::uint8_t>& pixels() const { return pixels_; }
  std::vector<std::uint8_t>& pixels() { return pixels_; }

  std::array<std::uint8_t, 3> rgb(std::uint32_t x, std::uint32_t y) const {
    std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
  }
  void set_rgb(std::uint32_t x, std::uint32_t y, std::uint8_t r, std::uint8_t g,
               std::uint8_t b) {
    std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    pixels_[i] = r;
    pixels_[i + 1] = g;
    pixels_[i + 2] = b;
  }

  bool operator==(const Frame& other) const = default;

 private:
  std::uint32_t width_;
  std::uint32_t height_;
  std::vector<std::uint8_t> pixels_;
};

// A still picture is structurally a Frame; the alias marks adversary images.
using Image = Frame;

// Frame rate kept exactly as written in the container header (not reduced),
// so formats like 30000:1001 survive a round trip verbatim.
struct Fps {
  std::uint32_t num = 25;
  std::uint32_t den = 1;

  Seconds frame_duration() const { return Seconds(den, num); }
  bool operator==(const Fps&) const = default;
};

// An in-memory clip. At least one frame; all frames share one geometry.
class VideoClip {
 public:
  VideoClip(std::vector<Frame> frames, Fps fps);

  const std::vector<Frame>& frames() const { return frames_; }
  std::vector<Frame>& frames() { return frames_; }
  Fps fps() const { return fps_; }

  std::uint32_t width() const { return frames_.front().width(); }
  std::uint32_t height() const { return frames_.front().height(); }
  std::size_t frame_count() const { return frames_.size(); }

  Seconds duration() const {
    return Seconds(static_cast<std::int64_t>(frames_.size()) * fps_.den, fps_.num);
  }

  // Index of the frame whose display interval [i/fps, (i+1)/fps) contains t.
  std::int64_t frame_index_at(const Seconds& t) const {
    return floor_rational(t * Seconds(fps_.num, fps_.den));
  }

 private:
  std::vector<Frame> frames_;
  Fps fps_;
};

}  // namespace vidshield
