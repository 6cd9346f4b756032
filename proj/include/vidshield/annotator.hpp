#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vidshield/defense.hpp"
#include "vidshield/frame.hpp"
#include "vidshield/labeler.hpp"
#include "vidshield/rational.hpp"

namespace vidshield {

struct AnnotatorConfig {
  Seconds sample_rate{1};      // samples per second
  double shot_threshold = 0.4; // L1 distance between consecutive samples
  std::size_t top_k_video = 7;
  std::size_t top_k_shot = 3;
  AggregationSpec aggregation;
};

struct SampledFrame {
  Seconds time{0};
  std::size_t frame_index = 0;
};

// Sampling instants t = 0, 1/rate, 2/rate, ... < duration; the frame shown at
// t is the one whose display interval contains it.
std::vector<SampledFrame> sample_frames(const VideoClip& clip, const Seconds& rate);

// Indices i such that a shot boundary lies between samples i-1 and i, i.e.
// L1(feat[i-1], feat[i]) > threshold. The boundary's timestamp is sample i's.
std::vector<std::size_t> detect_shots(std::span<const FeatureVector> features,
                                      double threshold);

struct Shot {
  Seconds start{0};
  Seconds end{0};
  std::vector<LabelScore> labels;  // ranked, top_k_shot at most
};

struct AnnotationResult {
  std::vector<LabelScore> video_labels;  // ranked, top_k_video at most
  std::vector<Shot> shots;               // partition of [0, duration)
  std::vector<Seconds> shot_changes;     // |shots| - 1 boundary timestamps
  bool fail_open = false;                // a filter emptied the sample set
};

// The full victim pipeline: sample, classify, detect shots, label shots and
// the video. Filters and the aggregation mode come from config.aggregation.
//
// Under duration-weighted aggregation each detected boundary is refined to
// frame precision (scanning only the frames between the two samples that
// flank it) so that shot durations reflect the actual extent of the content;
// a one-frame insertion then carries one frame's worth of weight instead of a
// full sampling interval's. All other modes never read non-sampled frames.
AnnotationResult annotate(const VideoClip& clip, const LabelModel& model,
                          const AnnotatorConfig& config);

// Wire format (also the HTTP response body):
// {"videoLabels":[{"description":...,"confidence":...}],
//  "shots":[{"startTime":...,"endTime":...,"labels":[...]}],
//  "shotChanges":[...]}
// plus "failOpen":true only when a filter failed open.
std::string annotation_to_json(const AnnotationResult& result);

}  // namespace vidshield
