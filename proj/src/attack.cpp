#include "vidshield/attack.hpp"

#include <algorithm>

#include "vidshield/error.hpp"
#include "vidshield/video_io.hpp"

namespace vidshield {

const char* attack_mode_name(AttackMode mode) {
  return mode == AttackMode::Replace ? "replace" : "insert";
}

AttackMode attack_mode_from_name(const std::string& name) {
  if (name == "replace") return AttackMode::Replace;
  if (name == "insert") return AttackMode::Insert;
  throw Error(ErrorKind::InvalidSpec, "unknown attack mode: " + name);
}

AttackConfig AttackConfig::make(Image image, Seconds period, Seconds phase,
                                AttackMode mode) {
  if (period <= Seconds(0)) {
    throw Error(ErrorKind::InvalidSpec, "attack period must be positive");
  }
  if (phase < Seconds(0)) {
    throw Error(ErrorKind::InvalidSpec, "attack phase must be non-negative");
  }
  phase -= Seconds(floor_rational(phase / period)) * period;
  return AttackConfig{std::move(image), period, phase, mode};
}

std::vector<std::int64_t> attack_frame_indices(const AttackConfig& cfg,
                                               const VideoClip& clip) {
  const Seconds duration = clip.duration();
  std::vector<std::int64_t> indices;
  for (std::int64_t k = 0;; ++k) {
    Seconds t = cfg.phase + Seconds(k) * cfg.period;
    if (!(t < duration)) break;
    indices.push_back(clip.frame_index_at(t));
  }
  return indices;
}

VideoClip apply_attack(const VideoClip& clip, const AttackConfig& cfg) {
  const Frame fitted = fit_image(cfg.image, clip.width(), clip.height());
  const std::vector<std::int64_t> indices = attack_frame_indices(cfg, clip);

  std::vector<Frame> frames = clip.frames();
  if (cfg.mode == AttackMode::Replace) {
    for (std::int64_t idx : indices) {
      frames[static_cast<std::size_t>(idx)] = fitted;
    }
  } else {
    // Back to front, so indices computed on the original timeline stay valid.
    for (auto it = indices.rbegin(); it != indices.rend(); ++it) {
      frames.insert(frames.begin() + static_cast<std::ptrdiff_t>(*it), fitted);
    }
  }
  return VideoClip(std::move(frames), clip.fps());
}

double insertion_rate(const AttackConfig& cfg, const VideoClip& clip) {
  std::vector<std::int64_t> indices = attack_frame_indices(cfg, clip);
  if (cfg.mode == AttackMode::Replace) {
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return static_cast<double>(indices.size()) /
           static_cast<double>(clip.frame_count());
  }
  return static_cast<double>(indices.size()) /
         static_cast<double>(clip.frame_count() + indices.size());
}

}  // namespace vidshield
