#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vidshield/frame.hpp"

namespace vidshield {

// 4x4x4 joint RGB histogram, L1 normalized. Bin index:
// (R>>6)*16 + (G>>6)*4 + (B>>6).
using FeatureVector = std::array<double, 64>;

constexpr std::size_t kFeatureBins = 64;

struct LabelScore {
  std::string label;
  double confidence = 0.0;

  bool operator==(const LabelScore&) const = default;
};

// Nearest-centroid model over histogram space. Prototypes are per-label means
// of reference-image features; the map keeps labels in lexicographic order so
// every downstream computation is order-stable.
struct LabelModel {
  std::map<std::string, FeatureVector> prototypes;
  double temperature = 0.05;
};

FeatureVector extract_features(const Frame& frame);

double l1_distance(const FeatureVector& a, const FeatureVector& b);

// Throws Error{InsufficientLabels} unless there are >= 2 distinct labels with
// >= 1 image each.
LabelModel train(const std::vector<std::pair<std::string, Image>>& refs,
                 double temperature = 0.05);

// Softmax over negative distances scaled by tau, computed against the minimum
// distance so the result is invariant (to rounding) under a constant shift of
// all distances.
std::vector<double> confidences_from_distances(std::span<const double> distances,
                                               double tau);

// Ranked (confidence desc, label asc) scores over every model label.
std::vector<LabelScore> classify(const LabelModel& model, const FeatureVector& f);

// Model persistence: {"temperature": t, "prototypes": {label: [64 floats]}}.
std::string model_to_json(const LabelModel& model);
LabelModel model_from_json(const std::string& json_text);

}  // namespace vidshield
