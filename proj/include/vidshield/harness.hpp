#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vidshield/annotator.hpp"
#include "vidshield/attack.hpp"
#include "vidshield/frame.hpp"
#include "vidshield/labeler.hpp"

namespace vidshield {

struct AttackMetrics {
  bool video_label_flipped = false;  // attacked top-1 video label is an image label
  double top_confidence = 0.0;       // attacked top-1 video confidence
  double shot_domination = 0.0;      // fraction of attacked shots topped by an image label
  double insertion_rate = 0.0;
  std::size_t shot_count_baseline = 0;
  std::size_t shot_count_attacked = 0;
};

// Compares an attacked annotation against the baseline one (same annotator
// config for both). Throws Error{LabelSetEmpty} on an empty image label set.
AttackMetrics evaluate(const std::vector<std::string>& image_labels,
                       const AnnotationResult& attacked,
                       const AnnotationResult& baseline,
                       const AttackConfig& cfg, const VideoClip& clip);

struct SweepClip {
  std::string name;
  VideoClip clip;
};

struct SweepImage {
  std::string name;
  std::string label;
  Image image;
};

struct SweepSpec {
  std::vector<SweepClip> clips;
  std::vector<SweepImage> images;
  std::vector<AttackMode> modes{AttackMode::Replace, AttackMode::Insert};
  std::vector<Seconds> periods{Seconds(1, 2), Seconds(1), Seconds(2), Seconds(4)};
  std::vector<Seconds> phases{Seconds(0), Seconds(1, 4), Seconds(1, 2)};
  std::vector<std::string> defenses{"none", "duration", "minrun:2",
                                    "isolated:0.4", "combo"};
};

struct SweepRow {
  std::string clip;
  std::string image;
  AttackMode mode = AttackMode::Replace;
  Seconds period{0};
  Seconds phase{0};
  std::string defense;
  AttackMetrics metrics;
};

// Full Cartesian product in fixed (clip, image, mode, period, phase, defense)
// order. Baselines are annotated once per (clip, defense) pair. Throws
// Error{InvalidSpec} when any list is empty.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const LabelModel& model,
                                const AnnotatorConfig& base_config);

// clip,image,mode,period_s,phase_s,defense,flipped,top_conf,shot_domination,
// insertion_rate,shots_base,shots_atk
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string sweep_to_json(const std::vector<SweepRow>& rows);

std::string metrics_to_json(const AttackMetrics& metrics);

}  // namespace vidshield
