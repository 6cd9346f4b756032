#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "vidshield/corpus.hpp"
#include "vidshield/frame.hpp"
#include "vidshield/labeler.hpp"

namespace vidshield::testing {

inline Frame solid_frame(std::uint32_t w, std::uint32_t h, std::uint8_t r,
                         std::uint8_t g, std::uint8_t b) {
  Frame frame(w, h);
  for (std::uint32_t y = 0; y < h; ++y)
    for (std::uint32_t x = 0; x < w; ++x) frame.set_rgb(x, y, r, g, b);
  return frame;
}

// Reference BT.601 full-range conversion, written independently of the
// library path it checks (direct textbook coefficients, no shared code).
inline std::array<int, 3> oracle_rgb_to_yuv(int r, int g, int b) {
  double y = 0.299 * r + 0.587 * g + 0.114 * b;
  double cb = 128.0 - 0.16873589164785553 * r - 0.33126410835214446 * g + 0.5 * b;
  double cr = 128.0 + 0.5 * r - 0.418687589158345 * g - 0.081312410841655 * b;
  auto q = [](double v) {
    int i = static_cast<int>(std::round(v));
    return i < 0 ? 0 : (i > 255 ? 255 : i);
  };
  return {q(y), q(cb), q(cr)};
}

inline std::array<int, 3> oracle_yuv_to_rgb(int y, int u, int v) {
  double r = y + 1.402 * (v - 128.0);
  double g = y - 0.34413628620102216 * (u - 128.0) - 0.7141362862010221 * (v - 128.0);
  double b = y + 1.772 * (u - 128.0);
  auto q = [](double val) {
    int i = static_cast<int>(std::round(val));
    return i < 0 ? 0 : (i > 255 ? 255 : i);
  };
  return {q(r), q(g), q(b)};
}

// Shared fixture: the default 60 s corpus, its reference images and a model
// trained on them. Built once per test binary.
struct DefaultWorld {
  CorpusSpec spec;
  VideoClip clip;
  GroundTruth ground_truth;
  std::vector<std::pair<std::string, Image>> refs;
  LabelModel model;
};

inline const DefaultWorld& default_world() {
  static const DefaultWorld world = [] {
    CorpusSpec spec = default_corpus_spec();
    GeneratedClip generated = generate_clip(spec);
    auto refs = generate_reference_images(spec, default_model_labels(), 3, 11);
    LabelModel model = train(refs);
    return DefaultWorld{spec, std::move(generated.clip),
                        std::move(generated.ground_truth), std::move(refs),
                        std::move(model)};
  }();
  return world;
}

inline Image attack_image(const std::string& label) {
  for (const auto& [l, image] : default_world().refs) {
    if (l == label) return image;
  }
  throw std::runtime_error("no reference image for " + label);
}

}  // namespace vidshield::testing
