#include "vidshield/frame.hpp"

#include <stdexcept>

namespace vidshield {

Frame::Frame(std::uint32_t width, std::uint32_t height)
    : width_(width), height_(height),
      pixels_(static_cast<std::size_t>(width) * height * 3, 0) {
  if (width == 0 || height == 0) {
    throw std::invalid_argument("frame dimensions must be positive");
  }
}

Frame::Frame(std::uint32_t width, std::uint32_t height,
             std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width == 0 || height == 0) {
    throw std::invalid_argument("frame dimensions must be positive");
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * height * 3) {
    throw std::invalid_argument("pixel buffer length must be width*height*3");
  }
}

VideoClip::VideoClip(std::vector<Frame> frames, Fps fps)
    : frames_(std::move(frames)), fps_(fps) {
  if (frames_.empty()) {
    throw std::invalid_argument("clip needs at least one frame");
  }
  if (fps_.num == 0 || fps_.den == 0) {
    throw std::invalid_argument("frame rate must be positive");
  }
  for (const Frame& f : frames_) {
    if (f.width() != frames_.front().width() ||
        f.height() != frames_.front().height()) {
      throw std::invalid_argument("all frames must share one geometry");
    }
  }
}

}  // namespace vidshield
