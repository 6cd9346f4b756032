#include <doctest.h>

#include <set>

#include "test_support.hpp"
#include "vidshield/corpus.hpp"
#include "vidshield/error.hpp"
#include "vidshield/labeler.hpp"
#include "vidshield/video_io.hpp"

using namespace vidshield;
using vidshield::testing::default_world;

TEST_CASE("generate_clip renders one flat scene") {
  CorpusSpec spec;
  spec.fps = {25, 1};
  spec.width = 8;
  spec.height = 8;
  spec.scenes = {{"red-thing", Seconds(2), {200, 40, 40}, Texture::Flat, 0}};

  GeneratedClip generated = generate_clip(spec);
  CHECK(generated.clip.frame_count() == 50);
  for (const Frame& frame : generated.clip.frames()) {
    CHECK(frame == generated.clip.frames().front());
  }
  CHECK(generated.clip.frames()[0].rgb(3, 3) ==
        std::array<std::uint8_t, 3>{200, 40, 40});

  REQUIRE(generated.ground_truth.size() == 1);
  CHECK(generated.ground_truth[0].label == "red-thing");
  CHECK(generated.ground_truth[0].start == Seconds(0));
  CHECK(generated.ground_truth[0].end == Seconds(2));
}

TEST_CASE("generate_clip lays scenes back to back") {
  const auto& world = default_world();
  CHECK(world.clip.frame_count() == 1500);
  REQUIRE(world.ground_truth.size() == 3);
  CHECK(world.ground_truth[1].start == Seconds(20));
  CHECK(world.ground_truth[2].start == Seconds(40));

  // Scene boundaries land exactly at frames 500 and 1000.
  CHECK(world.clip.frames()[499] != world.clip.frames()[500]);
  CHECK(world.clip.frames()[999] != world.clip.frames()[1000]);
}

TEST_CASE("generate_clip is deterministic down to the emitted bytes") {
  CorpusSpec spec = default_corpus_spec(42);
  auto a = write_y4m(generate_clip(spec).clip);
  auto b = write_y4m(generate_clip(spec).clip);
  CHECK(a == b);

  CorpusSpec other = default_corpus_spec(43);
  CHECK(write_y4m(generate_clip(other).clip) != a);
}

TEST_CASE("generate_clip validates its spec") {
  CorpusSpec empty;
  empty.fps = {25, 1};
  CHECK_THROWS_AS(generate_clip(empty), Error);

  CorpusSpec fractional;
  fractional.fps = {25, 1};
  fractional.scenes = {{"x", Seconds(1, 3), {200, 40, 40}, Texture::Flat, 0}};
  try {
    generate_clip(fractional);  // 25/3 frames
    FAIL_CHECK("expected InvalidSpec");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidSpec);
  }
}

TEST_CASE("reference images sit closest to their own scene's frames") {
  const auto& world = default_world();
  auto refs = generate_reference_images(world.spec, {"canyon"}, 3, 5);
  REQUIRE(refs.size() == 3);

  FeatureVector canyon_frame = extract_features(world.clip.frames()[10]);
  FeatureVector meadow_frame = extract_features(world.clip.frames()[510]);
  for (const auto& [label, image] : refs) {
    CHECK(label == "canyon");
    FeatureVector f = extract_features(image);
    CHECK(l1_distance(f, canyon_frame) < l1_distance(f, meadow_frame));
  }

  CHECK_THROWS_AS(generate_reference_images(world.spec, {"canyon"}, 0, 5), Error);
}

TEST_CASE("prototypes of disjoint palettes stay at least 0.5 apart") {
  const LabelModel& model = default_world().model;
  for (auto a = model.prototypes.begin(); a != model.prototypes.end(); ++a) {
    for (auto b = std::next(a); b != model.prototypes.end(); ++b) {
      CHECK(l1_distance(a->second, b->second) >= 0.5);
    }
  }
}

TEST_CASE("classifier is perfect on the corpus, even after the container round trip") {
  const auto& world = default_world();
  VideoClip reparsed = parse_y4m(write_y4m(world.clip));

  std::size_t frame_index = 0;
  for (const GroundTruthEntry& entry : world.ground_truth) {
    Seconds frames = (entry.end - entry.start) * Seconds(world.spec.fps.num,
                                                         world.spec.fps.den);
    REQUIRE(frames.denominator() == 1);
    for (std::int64_t k = 0; k < frames.numerator(); ++k, ++frame_index) {
      auto ranked = classify(world.model,
                             extract_features(reparsed.frames()[frame_index]));
      REQUIRE(ranked[0].label == entry.label);
      // Temperature calibration: confident in-distribution matches.
      REQUIRE(ranked[0].confidence >= 0.99);
    }
  }
  CHECK(frame_index == reparsed.frame_count());
}

TEST_CASE("corpus spec JSON round trips") {
  CorpusSpec spec = default_corpus_spec(9);
  CorpusSpec reloaded = corpus_spec_from_json(corpus_spec_to_json(spec));
  CHECK(reloaded.scenes.size() == spec.scenes.size());
  CHECK(reloaded.fps == spec.fps);
  CHECK(reloaded.width == spec.width);
  CHECK(reloaded.rng_seed == spec.rng_seed);
  for (std::size_t i = 0; i < spec.scenes.size(); ++i) {
    CHECK(reloaded.scenes[i].label == spec.scenes[i].label);
    CHECK(reloaded.scenes[i].duration == spec.scenes[i].duration);
    CHECK(reloaded.scenes[i].palette == spec.scenes[i].palette);
    CHECK(reloaded.scenes[i].texture == spec.scenes[i].texture);
  }
  CHECK(write_y4m(generate_clip(reloaded).clip) ==
        write_y4m(generate_clip(spec).clip));

  CHECK_THROWS_AS(corpus_spec_from_json("{}"), Error);
}

TEST_CASE("unknown labels draw reserve palettes deterministically") {
  const auto& world = default_world();
  auto a = generate_reference_images(world.spec, {"zebra-crossing"}, 2, 3);
  auto b = generate_reference_images(world.spec, {"zebra-crossing"}, 2, 3);
  REQUIRE(a.size() == 2);
  CHECK(a[0].second == b[0].second);

  // Reserve palettes must not collide with the style book.
  FeatureVector reserve = extract_features(a[0].second);
  for (const auto& [label, style] : default_label_styles()) {
    auto refs = generate_reference_images(world.spec, {label}, 1, 3);
    CHECK(l1_distance(reserve, extract_features(refs[0].second)) > 0.5);
  }
}
