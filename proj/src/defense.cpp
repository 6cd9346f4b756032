#include "vidshield/defense.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <stdexcept>

#include "vidshield/annotator.hpp"
#include "vidshield/error.hpp"

namespace vidshield {

AggregationSpec aggregation_from_string(const std::string& text) {
  AggregationSpec spec;
  if (text == "none" || text.empty()) {
    return spec;
  }
  if (text == "duration") {
    spec.mode = AggregationMode::DurationWeighted;
    return spec;
  }
  if (text == "combo") {
    spec.mode = AggregationMode::DurationWeighted;
    spec.reject_isolated = true;
    spec.min_run_filter = true;
    return spec;
  }
  if (text.rfind("minrun:", 0) == 0) {
    try {
      std::size_t pos = 0;
      const std::string arg = text.substr(7);
      long m = std::stol(arg, &pos);
      if (pos != arg.size() || m < 1) throw std::invalid_argument(arg);
      spec.min_run_filter = true;
      spec.params.min_run = static_cast<std::size_t>(m);
      return spec;
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidSpec, "bad min-run defense: " + text);
    }
  }
  if (text.rfind("isolated:", 0) == 0) {
    try {
      std::size_t pos = 0;
      const std::string arg = text.substr(9);
      double kappa = std::stod(arg, &pos);
      if (pos != arg.size() || kappa <= 0.0 || kappa >= 2.0) {
        throw std::invalid_argument(arg);
      }
      spec.reject_isolated = true;
      spec.params.isolation_kappa = kappa;
      return spec;
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidSpec, "bad isolated defense: " + text);
    }
  }
  throw Error(ErrorKind::InvalidSpec, "unknown defense: " + text);
}

std::string aggregation_to_string(const AggregationSpec& spec) {
  if (spec.reject_isolated && spec.min_run_filter &&
      spec.mode == AggregationMode::DurationWeighted) {
    return "combo";
  }
  if (spec.min_run_filter) return "minrun:" + std::to_string(spec.params.min_run);
  if (spec.reject_isolated) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "isolated:%g", spec.params.isolation_kappa);
    return buf;
  }
  return spec.mode == AggregationMode::DurationWeighted ? "duration" : "none";
}

FilterResult filter_min_run(std::span<const std::string> top_labels, std::size_t m) {
  if (m == 0) {
    throw Error(ErrorKind::InvalidSpec, "min run length must be at least 1");
  }
  FilterResult result;
  std::size_t n = top_labels.size();
  std::size_t run_start = 0;
  while (run_start < n) {
    std::size_t run_end = run_start + 1;
    while (run_end < n && top_labels[run_end] == top_labels[run_start]) ++run_end;
    if (run_end - run_start >= m) {
      for (std::size_t i = run_start; i < run_end; ++i) result.kept.push_back(i);
    }
    run_start = run_end;
  }
  if (result.kept.empty() && n > 0) {
    result.kept.resize(n);
    std::iota(result.kept.begin(), result.kept.end(), std::size_t{0});
    result.fail_open = true;
  }
  return result;
}

FilterResult reject_isolated_frames(std::span<const FeatureVector> features,
                                    double kappa) {
  if (kappa <= 0.0 || kappa >= 2.0) {
    throw Error(ErrorKind::InvalidSpec, "isolation radius must be in (0, 2)");
  }
  FilterResult result;
  std::size_t n = features.size();
  if (n < 3) {
    result.kept.resize(n);
    std::iota(result.kept.begin(), result.kept.end(), std::size_t{0});
    return result;
  }
  for (std::size_t i = 0; i < n; ++i) {
    bool rejected = false;
    if (i > 0 && i + 1 < n) {
      rejected = l1_distance(features[i - 1], features[i + 1]) <= kappa &&
                 l1_distance(features[i], features[i - 1]) > kappa &&
                 l1_distance(features[i], features[i + 1]) > kappa;
    }
    if (!rejected) result.kept.push_back(i);
  }
  return result;
}

std::vector<LabelScore> aggregate_duration_weighted(const std::vector<Shot>& shots) {
  double total_duration = 0.0;
  for (const Shot& shot : shots) total_duration += to_double(shot.end - shot.start);

  std::map<std::string, double> scores;
  for (const Shot& shot : shots) {
    if (shot.labels.empty()) continue;
    const LabelScore& top = shot.labels.front();
    scores[top.label] += to_double(shot.end - shot.start) * top.confidence;
  }

  std::vector<LabelScore> ranked;
  ranked.reserve(scores.size());
  for (const auto& [label, score] : scores) {
    ranked.push_back({label, score / total_duration});
  }
  std::sort(ranked.begin(), ranked.end(), [](const LabelScore& a, const LabelScore& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return a.label < b.label;
  });
  return ranked;
}

}  // namespace vidshield
