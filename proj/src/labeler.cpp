#include "vidshield/labeler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "vidshield/error.hpp"

namespace vidshield {

FeatureVector extract_features(const Frame& frame) {
  FeatureVector bins{};
  const std::vector<std::uint8_t>& px = frame.pixels();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    std::size_t bin = (static_cast<std::size_t>(px[i] >> 6) << 4) |
                      (static_cast<std::size_t>(px[i + 1] >> 6) << 2) |
                      static_cast<std::size_t>(px[i + 2] >> 6);
    bins[bin] += 1.0;
  }
  double count = static_cast<double>(frame.pixel_count());
  for (double& b : bins) b /= count;
  return bins;
}

double l1_distance(const FeatureVector& a, const FeatureVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < kFeatureBins; ++i) d += std::abs(a[i] - b[i]);
  return d;
}

LabelModel train(const std::vector<std::pair<std::string, Image>>& refs,
                 double temperature) {
  std::map<std::string, std::pair<FeatureVector, std::size_t>> sums;
  for (const auto& [label, image] : refs) {
    FeatureVector f = extract_features(image);
    auto& [sum, n] = sums[label];
    for (std::size_t i = 0; i < kFeatureBins; ++i) sum[i] += f[i];
    ++n;
  }
  if (sums.size() < 2) {
    throw Error(ErrorKind::InsufficientLabels,
                "training needs at least 2 distinct labels");
  }

  LabelModel model;
  model.temperature = temperature;
  for (auto& [label, sum_n] : sums) {
    auto& [sum, n] = sum_n;
    double total = 0.0;
    for (double v : sum) total += v;
    FeatureVector proto{};
    for (std::size_t i = 0; i < kFeatureBins; ++i) proto[i] = sum[i] / total;
    model.prototypes.emplace(label, proto);
    (void)n;
  }
  return model;
}

std::vector<double> confidences_from_distances(std::span<const double> distances,
                                               double tau) {
  double dmin = std::numeric_limits<double>::infinity();
  for (double d : distances) dmin = std::min(dmin, d);

  std::vector<double> conf(distances.size());
  double total = 0.0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    conf[i] = std::exp((dmin - distances[i]) / tau);
    total += conf[i];
  }
  for (double& c : conf) c /= total;
  return conf;
}

std::vector<LabelScore> classify(const LabelModel& model, const FeatureVector& f) {
  std::vector<const std::string*> labels;
  std::vector<double> distances;
  labels.reserve(model.prototypes.size());
  distances.reserve(model.prototypes.size());
  for (const auto& [label, proto] : model.prototypes) {
    labels.push_back(&label);
    distances.push_back(l1_distance(f, proto));
  }

  std::vector<double> conf = confidences_from_distances(distances, model.temperature);

  std::vector<LabelScore> ranked(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ranked[i] = {*labels[i], conf[i]};
  }
  std::sort(ranked.begin(), ranked.end(), [](const LabelScore& a, const LabelScore& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return a.label < b.label;
  });
  return ranked;
}

std::string model_to_json(const LabelModel& model) {
  nlohmann::json j;
  j["temperature"] = model.temperature;
  nlohmann::json protos = nlohmann::json::object();
  for (const auto& [label, proto] : model.prototypes) {
    protos[label] = proto;
  }
  j["prototypes"] = protos;
  return j.dump(2) + "\n";
}

LabelModel model_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.contains("temperature") || !j.contains("prototypes")) {
    throw Error(ErrorKind::InvalidSpec, "malformed model JSON");
  }
  LabelModel model;
  model.temperature = j["temperature"].get<double>();
  for (const auto& [label, bins] : j["prototypes"].items()) {
    if (!bins.is_array() || bins.size() != kFeatureBins) {
      throw Error(ErrorKind::InvalidSpec, "prototype for '" + label +
                                              "' must have 64 bins");
    }
    FeatureVector proto{};
    for (std::size_t i = 0; i < kFeatureBins; ++i) proto[i] = bins[i].get<double>();
    model.prototypes.emplace(label, proto);
  }
  if (model.prototypes.size() < 2) {
    throw Error(ErrorKind::InsufficientLabels, "model needs at least 2 labels");
  }
  return model;
}

}  // namespace vidshield
