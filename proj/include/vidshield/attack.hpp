#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vidshield/frame.hpp"
#include "vidshield/rational.hpp"

namespace vidshield {

enum class AttackMode { Replace, Insert };

const char* attack_mode_name(AttackMode mode);
AttackMode attack_mode_from_name(const std::string& name);

// Periodic image placement at instants t_k = phase + k * period below the
// original clip duration. Replace overwrites the frame on screen at t_k;
// insert splices the image immediately before it, lengthening the clip.
struct AttackConfig {
  Image image;
  Seconds period{2};
  Seconds phase{0};  // normalized into [0, period)
  AttackMode mode = AttackMode::Replace;

  // Validates period > 0, phase >= 0 and normalizes phase modulo period.
  static AttackConfig make(Image image, Seconds period, Seconds phase,
                           AttackMode mode);
};

// Original-timeline frame indices floor(t_k * fps), in ascending order,
// duplicates preserved (a period shorter than one frame targets an index
// more than once).
std::vector<std::int64_t> attack_frame_indices(const AttackConfig& cfg,
                                               const VideoClip& clip);

VideoClip apply_attack(const VideoClip& clip, const AttackConfig& cfg);

// Replace: distinct overwritten frames / frame count.
// Insert: spliced frames / frame count after insertion.
double insertion_rate(const AttackConfig& cfg, const VideoClip& clip);

}  // namespace vidshield
