#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vidshield/frame.hpp"
#include "vidshield/rational.hpp"

namespace vidshield {

enum class Texture { Flat, Gradient, MovingBlocks };

const char* texture_name(Texture t);
Texture texture_from_name(const std::string& name);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

struct SceneSpec {
  std::string label;
  Seconds duration{0};
  Rgb palette;
  Texture texture = Texture::Flat;
  std::uint32_t motion_seed = 0;
};

struct CorpusSpec {
  std::vector<SceneSpec> scenes;
  Fps fps;
  std::uint32_t width = 64;
  std::uint32_t height = 64;
  std::uint32_t rng_seed = 0;
};

struct GroundTruthEntry {
  std::string label;
  Seconds start{0};
  Seconds end{0};
};
using GroundTruth = std::vector<GroundTruthEntry>;

struct GeneratedClip {
  VideoClip clip;
  GroundTruth ground_truth;
};

// Renders the scenes back to back. Every palette sits well inside its
// histogram bin so the container's color round trip cannot move pixels
// across bins; scenes with disjoint palettes therefore stay separable all
// the way through the pipeline. Throws Error{InvalidSpec} on zero scenes or
// a duration that is not a whole number of frames.
GeneratedClip generate_clip(const CorpusSpec& spec);

struct LabelStyle {
  Rgb palette;
  Texture texture = Texture::Flat;
};

// Fixed style book used by the default corpus and for labels that do not
// appear among a spec's scenes (e.g. attack-image labels). All palettes live
// in pairwise distinct histogram bins.
const std::map<std::string, LabelStyle>& default_label_styles();

// Styles for reference-image generation: scene labels use their scene's
// palette/texture, other labels fall back to the style book. Unknown labels
// beyond the book raise Error{InvalidSpec}.
std::map<std::string, LabelStyle> resolve_styles(const CorpusSpec& spec,
                                                 const std::vector<std::string>& labels);

// per_label images for each label, deterministic in (seed, label, index).
// Throws Error{InvalidSpec} when per_label < 1.
std::vector<std::pair<std::string, Image>> generate_reference_images(
    const CorpusSpec& spec, const std::vector<std::string>& labels,
    std::uint32_t per_label, std::uint32_t seed);

// The evaluation workhorse: 60 s @ 25 fps, 64x64, three 20 s scenes
// ("canyon" flat, "meadow" moving blocks, "ocean" gradient).
CorpusSpec default_corpus_spec(std::uint32_t seed = 7);

// Scene labels of the default corpus plus the four attack-image labels.
std::vector<std::string> default_model_labels();

std::string corpus_spec_to_json(const CorpusSpec& spec);
CorpusSpec corpus_spec_from_json(const std::string& json_text);

std::string ground_truth_to_json(const GroundTruth& gt);

}  // namespace vidshield
