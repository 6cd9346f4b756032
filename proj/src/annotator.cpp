#include "vidshield/annotator.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <json.hpp>

#include "vidshield/error.hpp"

namespace vidshield {
namespace {

void validate_config(const AnnotatorConfig& config) {
  if (config.sample_rate <= Seconds(0)) {
    throw Error(ErrorKind::InvalidSpec, "sample rate must be positive");
  }
  if (config.shot_threshold <= 0.0 || config.shot_threshold >= 2.0) {
    throw Error(ErrorKind::InvalidSpec, "shot threshold must be in (0, 2)");
  }
  if (config.top_k_video == 0 || config.top_k_shot == 0) {
    throw Error(ErrorKind::InvalidSpec, "top-k values must be at least 1");
  }
}

std::vector<LabelScore> rank_scores(const std::map<std::string, double>& scores,
                                    std::size_t top_k) {
  std::vector<LabelScore> ranked;
  ranked.reserve(scores.size());
  for (const auto& [label, score] : scores) ranked.push_back({label, score});
  std::sort(ranked.begin(), ranked.end(),
            [](const LabelScore& a, const LabelScore& b) {
              if (a.confidence != b.confidence) return a.confidence > b.confidence;
              return a.label < b.label;
            });
  if (ranked.size() > top_k) ranked.resize(top_k);
  return ranked;
}

// Walks the frames between two sampled instants and returns the first
// frame-level feature jump as the boundary timestamp. Falls back to the
// sampled timestamp when the sampled features differ but no single
// frame-to-frame step does.
Seconds refine_boundary(const VideoClip& clip, std::size_t from_frame,
                        std::size_t to_frame, double threshold,
                        const Seconds& fallback) {
  if (from_frame >= to_frame) return fallback;
  FeatureVector prev = extract_features(clip.frames()[from_frame]);
  for (std::size_t f = from_frame + 1; f <= to_frame; ++f) {
    FeatureVector cur = extract_features(clip.frames()[f]);
    if (l1_distance(prev, cur) > threshold) {
      return Seconds(static_cast<std::int64_t>(f) * clip.fps().den, clip.fps().num);
    }
    prev = cur;
  }
  return fallback;
}

}  // namespace

std::vector<SampledFrame> sample_frames(const VideoClip& clip, const Seconds& rate) {
  if (rate <= Seconds(0)) {
    throw Error(ErrorKind::InvalidSpec, "sample rate must be positive");
  }
  const Seconds duration = clip.duration();
  std::vector<SampledFrame> samples;
  for (std::int64_t k = 0;; ++k) {
    Seconds t = Seconds(k) / rate;
    if (!(t < duration)) break;
    samples.push_back({t, static_cast<std::size_t>(clip.frame_index_at(t))});
  }
  return samples;
}

std::vector<std::size_t> detect_shots(std::span<const FeatureVector> features,
                                      double threshold) {
  std::vector<std::size_t> boundaries;
  for (std::size_t i = 1; i < features.size(); ++i) {
    if (l1_distance(features[i - 1], features[i]) > threshold) {
      boundaries.push_back(i);
    }
  }
  return boundaries;
}

AnnotationResult annotate(const VideoClip& clip, const LabelModel& model,
                          const AnnotatorConfig& config) {
  validate_config(config);

  const std::vector<SampledFrame> samples = sample_frames(clip, config.sample_rate);

  std::vector<FeatureVector> features;
  features.reserve(samples.size());
  std::vector<std::vector<LabelScore>> rankings;
  rankings.reserve(samples.size());
  for (const SampledFrame& s : samples) {
    features.push_back(extract_features(clip.frames()[s.frame_index]));
    rankings.push_back(classify(model, features.back()));
  }

  // Defense filters narrow the active sample set; everything downstream sees
  // only the survivors.
  std::vector<std::size_t> active(samples.size());
  std::iota(active.begin(), active.end(), std::size_t{0});
  bool fail_open = false;

  if (config.aggregation.reject_isolated) {
    std::vector<FeatureVector> active_features;
    active_features.reserve(active.size());
    for (std::size_t i : active) active_features.push_back(features[i]);
    FilterResult r = reject_isolated_frames(active_features,
                                            config.aggregation.params.isolation_kappa);
    std::vector<std::size_t> next;
    next.reserve(r.kept.size());
    for (std::size_t i : r.kept) next.push_back(active[i]);
    active = std::move(next);
  }
  if (config.aggregation.min_run_filter) {
    std::vector<std::string> active_tops;
    active_tops.reserve(active.size());
    for (std::size_t i : active) active_tops.push_back(rankings[i].front().label);
    FilterResult r = filter_min_run(active_tops, config.aggregation.params.min_run);
    fail_open = r.fail_open;
    std::vector<std::size_t> next;
    next.reserve(r.kept.size());
    for (std::size_t i : r.kept) next.push_back(active[i]);
    active = std::move(next);
  }

  std::vector<FeatureVector> active_features;
  active_features.reserve(active.size());
  for (std::size_t i : active) active_features.push_back(features[i]);
  const std::vector<std::size_t> boundaries =
      detect_shots(active_features, config.shot_threshold);

  const bool refine = config.aggregation.mode == AggregationMode::DurationWeighted;
  std::vector<Seconds> boundary_times;
  boundary_times.reserve(boundaries.size());
  for (std::size_t b : boundaries) {
    Seconds at = samples[active[b]].time;
    if (refine) {
      at = refine_boundary(clip, samples[active[b - 1]].frame_index,
                           samples[active[b]].frame_index, config.shot_threshold, at);
    }
    boundary_times.push_back(at);
  }

  AnnotationResult result;
  result.fail_open = fail_open;
  result.shot_changes = boundary_times;

  // Shots partition [0, duration); shot k holds the active samples between
  // boundaries k and k+1.
  std::vector<std::size_t> shot_starts{0};
  for (std::size_t b : boundaries) shot_starts.push_back(b);
  for (std::size_t k = 0; k < shot_starts.size(); ++k) {
    Shot shot;
    shot.start = k == 0 ? Seconds(0) : boundary_times[k - 1];
    shot.end = k + 1 < shot_starts.size() ? boundary_times[k] : clip.duration();

    std::size_t first = shot_starts[k];
    std::size_t last = k + 1 < shot_starts.size() ? shot_starts[k + 1] : active.size();
    std::map<std::string, double> scores;
    for (std::size_t p = first; p < last; ++p) {
      const LabelScore& top = rankings[active[p]].front();
      scores[top.label] += top.confidence;
    }
    for (auto& [label, score] : scores) score /= static_cast<double>(last - first);
    shot.labels = rank_scores(scores, config.top_k_shot);
    result.shots.push_back(std::move(shot));
  }

  if (config.aggregation.mode == AggregationMode::DurationWeighted) {
    result.video_labels = aggregate_duration_weighted(result.shots);
    if (result.video_labels.size() > config.top_k_video) {
      result.video_labels.resize(config.top_k_video);
    }
  } else {
    std::map<std::string, double> scores;
    for (std::size_t i : active) {
      const LabelScore& top = rankings[i].front();
      scores[top.label] += top.confidence;
    }
    for (auto& [label, score] : scores) score /= static_cast<double>(active.size());
    result.video_labels = rank_scores(scores, config.top_k_video);
  }
  return result;
}

std::string annotation_to_json(const AnnotationResult& result) {
  nlohmann::ordered_json j;
  j["videoLabels"] = nlohmann::ordered_json::array();
  for (const LabelScore& score : result.video_labels) {
    j["videoLabels"].push_back(
        {{"description", score.label}, {"confidence", score.confidence}});
  }
  j["shots"] = nlohmann::ordered_json::array();
  for (const Shot& shot : result.shots) {
    nlohmann::ordered_json s;
    s["startTime"] = to_double(shot.start);
    s["endTime"] = to_double(shot.end);
    s["labels"] = nlohmann::ordered_json::array();
    for (const LabelScore& score : shot.labels) {
      s["labels"].push_back(
          {{"description", score.label}, {"confidence", score.confidence}});
    }
    j["shots"].push_back(s);
  }
  j["shotChanges"] = nlohmann::ordered_json::array();
  for (const Seconds& t : result.shot_changes) {
    j["shotChanges"].push_back(to_double(t));
  }
  if (result.fail_open) j["failOpen"] = true;
  return j.dump(2) + "\n";
}

}  // namespace vidshield
