#include "vidshield/corpus.hpp"

#include <cmath>
#include <random>
#include <string_view>

#include <json.hpp>

#include "vidshield/error.hpp"

namespace vidshield {
namespace {

// Every rendered value keeps each channel at least 4 counts away from a
// histogram-bin edge, so the BT.601 round trip (error <= 2 per channel) can
// never move a pixel into a neighboring bin.
constexpr int kBinMargin = 4;

// Accent color for moving blocks; bin (1,1,1), unused by the style book.
constexpr Rgb kBlockAccent{110, 110, 110};

constexpr std::uint32_t kReferenceImageSize = 64;

std::uint8_t bin_low(std::uint8_t channel) {
  return static_cast<std::uint8_t>((channel & ~63) + kBinMargin);
}
std::uint8_t bin_high(std::uint8_t channel) {
  return static_cast<std::uint8_t>((channel & ~63) + 63 - kBinMargin);
}

std::uint32_t fnv1a(std::string_view text) {
  std::uint32_t h = 2166136261u;
  for (char c : text) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 16777619u;
  }
  return h;
}

std::uint32_t draw(std::mt19937& rng, std::uint32_t n) { return rng() % n; }

Frame render_textured_frame(std::uint32_t width, std::uint32_t height,
                            const LabelStyle& style, std::uint32_t seed_a,
                            std::uint32_t seed_b, std::uint32_t seed_c) {
  Frame frame(width, height);

  switch (style.texture) {
    case Texture::Flat: {
      for (std::uint32_t y = 0; y < height; ++y)
        for (std::uint32_t x = 0; x < width; ++x)
          frame.set_rgb(x, y, style.palette.r, style.palette.g, style.palette.b);
      break;
    }
    case Texture::Gradient: {
      // Vertical sweep across the palette's bin cell; never leaves the bin.
      for (std::uint32_t y = 0; y < height; ++y) {
        std::uint8_t rgb[3];
        const std::uint8_t channels[3] = {style.palette.r, style.palette.g,
                                          style.palette.b};
        for (int c = 0; c < 3; ++c) {
          std::uint8_t lo = bin_low(channels[c]);
          std::uint8_t hi = bin_high(channels[c]);
          std::uint32_t span = height > 1 ? height - 1 : 1;
          rgb[c] = static_cast<std::uint8_t>(lo + (hi - lo) * y / span);
        }
        for (std::uint32_t x = 0; x < width; ++x)
          frame.set_rgb(x, y, rgb[0], rgb[1], rgb[2]);
      }
      break;
    }
    case Texture::MovingBlocks: {
      for (std::uint32_t y = 0; y < height; ++y)
        for (std::uint32_t x = 0; x < width; ++x)
          frame.set_rgb(x, y, style.palette.r, style.palette.g, style.palette.b);

      // Three accent blocks whose position and size jitter per frame. The
      // accent fraction stays under ~6% of the frame, so sample-to-sample
      // histogram distance within a scene is far below the shot threshold
      // while distinct scenes remain ~2 apart.
      std::seed_seq seq{seed_a, seed_b, seed_c};
      std::mt19937 rng(seq);
      for (int block = 0; block < 3; ++block) {
        std::uint32_t bw = std::max<std::uint32_t>(2, width / 8 + draw(rng, 3) - 1);
        std::uint32_t bh = std::max<std::uint32_t>(2, height / 8 + draw(rng, 3) - 1);
        bw = std::min(bw, width);
        bh = std::min(bh, height);
        std::uint32_t x0 = draw(rng, width - bw + 1);
        std::uint32_t y0 = draw(rng, height - bh + 1);
        for (std::uint32_t y = y0; y < y0 + bh; ++y)
          for (std::uint32_t x = x0; x < x0 + bw; ++x)
            frame.set_rgb(x, y, kBlockAccent.r, kBlockAccent.g, kBlockAccent.b);
      }
      break;
    }
  }
  return frame;
}

const std::vector<LabelStyle>& reserve_styles() {
  static const std::vector<LabelStyle> reserve = {
      {{90, 200, 210}, Texture::Flat},
      {{20, 90, 90}, Texture::Flat},
      {{90, 40, 140}, Texture::Flat},
      {{160, 220, 160}, Texture::Flat},
  };
  return reserve;
}

}  // namespace

const char* texture_name(Texture t) {
  switch (t) {
    case Texture::Flat: return "flat";
    case Texture::Gradient: return "gradient";
    case Texture::MovingBlocks: return "moving-blocks";
  }
  return "flat";
}

Texture texture_from_name(const std::string& name) {
  if (name == "flat") return Texture::Flat;
  if (name == "gradient") return Texture::Gradient;
  if (name == "moving-blocks") return Texture::MovingBlocks;
  throw Error(ErrorKind::InvalidSpec, "unknown texture: " + name);
}

GeneratedClip generate_clip(const CorpusSpec& spec) {
  if (spec.scenes.empty()) {
    throw Error(ErrorKind::InvalidSpec, "corpus needs at least one scene");
  }
  if (spec.fps.num == 0 || spec.fps.den == 0) {
    throw Error(ErrorKind::InvalidSpec, "frame rate must be positive");
  }
  if (spec.width == 0 || spec.height == 0) {
    throw Error(ErrorKind::InvalidSpec, "frame dimensions must be positive");
  }

  std::vector<Frame> frames;
  GroundTruth ground_truth;
  Seconds cursor(0);
  for (std::size_t scene_index = 0; scene_index < spec.scenes.size(); ++scene_index) {
    const SceneSpec& scene = spec.scenes[scene_index];
    if (scene.duration <= Seconds(0)) {
      throw Error(ErrorKind::InvalidSpec,
                  "scene '" + scene.label + "' needs a positive duration");
    }
    Seconds frame_count = scene.duration * Seconds(spec.fps.num, spec.fps.den);
    if (frame_count.denominator() != 1) {
      throw Error(ErrorKind::InvalidSpec,
                  "scene '" + scene.label +
                      "' duration is not a whole number of frames");
    }
    std::int64_t n = frame_count.numerator();

    LabelStyle style{scene.palette, scene.texture};
    for (std::int64_t f = 0; f < n; ++f) {
      frames.push_back(render_textured_frame(
          spec.width, spec.height, style, spec.rng_seed,
          scene.motion_seed ^ static_cast<std::uint32_t>(scene_index),
          static_cast<std::uint32_t>(f)));
    }
    ground_truth.push_back({scene.label, cursor, cursor + scene.duration});
    cursor += scene.duration;
  }
  return {VideoClip(std::move(frames), spec.fps), std::move(ground_truth)};
}

const std::map<std::string, LabelStyle>& default_label_styles() {
  static const std::map<std::string, LabelStyle> styles = {
      {"canyon", {{220, 180, 90}, Texture::Flat}},
      {"meadow", {{40, 180, 70}, Texture::MovingBlocks}},
      {"ocean", {{40, 90, 200}, Texture::Gradient}},
      {"car", {{200, 40, 40}, Texture::Flat}},
      {"building", {{240, 240, 240}, Texture::Gradient}},
      {"pasta", {{230, 140, 30}, Texture::MovingBlocks}},
      {"laptop", {{150, 52, 180}, Texture::Flat}},
  };
  return styles;
}

std::map<std::string, LabelStyle> resolve_styles(
    const CorpusSpec& spec, const std::vector<std::string>& labels) {
  std::map<std::string, LabelStyle> styles;
  std::size_t reserve_next = 0;
  for (const std::string& label : labels) {
    if (styles.count(label)) continue;
    const SceneSpec* scene = nullptr;
    for (const SceneSpec& s : spec.scenes) {
      if (s.label == label) {
        scene = &s;
        break;
      }
    }
    if (scene != nullptr) {
      styles[label] = {scene->palette, scene->texture};
    } else if (auto it = default_label_styles().find(label);
               it != default_label_styles().end()) {
      styles[label] = it->second;
    } else if (reserve_next < reserve_styles().size()) {
      styles[label] = reserve_styles()[reserve_next++];
    } else {
      throw Error(ErrorKind::InvalidSpec,
                  "no palette available for label '" + label + "'");
    }
  }
  return styles;
}

std::vector<std::pair<std::string, Image>> generate_reference_images(
    const CorpusSpec& spec, const std::vector<std::string>& labels,
    std::uint32_t per_label, std::uint32_t seed) {
  if (per_label == 0) {
    throw Error(ErrorKind::InvalidSpec, "per_label must be at least 1");
  }
  std::map<std::string, LabelStyle> styles = resolve_styles(spec, labels);

  std::vector<std::pair<std::string, Image>> refs;
  refs.reserve(labels.size() * per_label);
  for (const std::string& label : labels) {
    const LabelStyle& style = styles.at(label);
    for (std::uint32_t k = 0; k < per_label; ++k) {
      refs.emplace_back(label,
                        render_textured_frame(kReferenceImageSize,
                                              kReferenceImageSize, style, seed,
                                              fnv1a(label), k));
    }
  }
  return refs;
}

CorpusSpec default_corpus_spec(std::uint32_t seed) {
  const auto& styles = default_label_styles();
  CorpusSpec spec;
  spec.fps = {25, 1};
  spec.width = 64;
  spec.height = 64;
  spec.rng_seed = seed;
  spec.scenes = {
      {"canyon", Seconds(20), styles.at("canyon").palette,
       styles.at("canyon").texture, 1},
      {"meadow", Seconds(20), styles.at("meadow").palette,
       styles.at("meadow").texture, 2},
      {"ocean", Seconds(20), styles.at("ocean").palette,
       styles.at("ocean").texture, 3},
  };
  return spec;
}

std::vector<std::string> default_model_labels() {
  return {"canyon", "meadow", "ocean", "car", "building", "pasta", "laptop"};
}

std::string corpus_spec_to_json(const CorpusSpec& spec) {
  nlohmann::ordered_json j;
  j["scenes"] = nlohmann::ordered_json::array();
  for (const SceneSpec& scene : spec.scenes) {
    nlohmann::ordered_json s;
    s["label"] = scene.label;
    s["duration_s"] = to_double(scene.duration);
    s["palette"] = {scene.palette.r, scene.palette.g, scene.palette.b};
    s["texture"] = texture_name(scene.texture);
    s["motion_seed"] = scene.motion_seed;
    j["scenes"].push_back(s);
  }
  j["fps"] = {{"num", spec.fps.num}, {"den", spec.fps.den}};
  j["width"] = spec.width;
  j["height"] = spec.height;
  j["seed"] = spec.rng_seed;
  return j.dump(2) + "\n";
}

CorpusSpec corpus_spec_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.contains("scenes") || !j.contains("fps")) {
    throw Error(ErrorKind::InvalidSpec, "malformed corpus spec JSON");
  }
  CorpusSpec spec;
  spec.fps.num = j["fps"].value("num", 25u);
  spec.fps.den = j["fps"].value("den", 1u);
  spec.width = j.value("width", 64u);
  spec.height = j.value("height", 64u);
  spec.rng_seed = j.value("seed", 0u);

  for (const auto& s : j["scenes"]) {
    SceneSpec scene;
    scene.label = s.at("label").get<std::string>();
    // Durations arrive as JSON numbers; snap to an exact frame count so the
    // timeline stays rational.
    double duration_s = s.at("duration_s").get<double>();
    double frames = duration_s * spec.fps.num / spec.fps.den;
    double rounded = std::round(frames);
    if (rounded < 1.0 || std::abs(frames - rounded) > 1e-6) {
      throw Error(ErrorKind::InvalidSpec,
                  "scene '" + scene.label +
                      "' duration is not a whole number of frames");
    }
    scene.duration = Seconds(static_cast<std::int64_t>(rounded) * spec.fps.den,
                             spec.fps.num);
    auto palette = s.at("palette");
    if (!palette.is_array() || palette.size() != 3) {
      throw Error(ErrorKind::InvalidSpec, "palette must be [r,g,b]");
    }
    scene.palette = {palette[0].get<std::uint8_t>(), palette[1].get<std::uint8_t>(),
                     palette[2].get<std::uint8_t>()};
    scene.texture = texture_from_name(s.at("texture").get<std::string>());
    scene.motion_seed = s.value("motion_seed", 0u);
    spec.scenes.push_back(scene);
  }
  if (spec.scenes.empty()) {
    throw Error(ErrorKind::InvalidSpec, "corpus needs at least one scene");
  }
  return spec;
}

std::string ground_truth_to_json(const GroundTruth& gt) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const GroundTruthEntry& e : gt) {
    j.push_back({{"label", e.label},
                 {"start_s", to_double(e.start)},
                 {"end_s", to_double(e.end)}});
  }
  return j.dump(2) + "\n";
}

}  // namespace vidshield
