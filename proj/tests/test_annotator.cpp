#include <doctest.h>

#include <random>
#include <set>

#include "test_support.hpp"
#include "vidshield/annotator.hpp"
#include "vidshield/attack.hpp"
#include "vidshield/error.hpp"
#include "vidshield/video_io.hpp"

using namespace vidshield;
using vidshield::testing::attack_image;
using vidshield::testing::default_world;
using vidshield::testing::solid_frame;

namespace {

VideoClip constant_clip(std::size_t frames, Fps fps) {
  return VideoClip(std::vector<Frame>(frames, solid_frame(8, 8, 200, 40, 40)), fps);
}

std::vector<FeatureVector> sampled_features(const VideoClip& clip,
                                            const Seconds& rate) {
  std::vector<FeatureVector> feats;
  for (const SampledFrame& s : sample_frames(clip, rate)) {
    feats.push_back(extract_features(clip.frames()[s.frame_index]));
  }
  return feats;
}

void check_partition(const AnnotationResult& result, const Seconds& duration) {
  REQUIRE(!result.shots.empty());
  CHECK(result.shots.front().start == Seconds(0));
  CHECK(result.shots.back().end == duration);
  for (std::size_t i = 0; i + 1 < result.shots.size(); ++i) {
    CHECK(result.shots[i].end == result.shots[i + 1].start);
    CHECK(result.shots[i].start < result.shots[i].end);
  }
  CHECK(result.shot_changes.size() == result.shots.size() - 1);
  for (std::size_t i = 0; i + 1 < result.shot_changes.size(); ++i) {
    CHECK(result.shot_changes[i] < result.shot_changes[i + 1]);
  }
}

}  // namespace

TEST_CASE("sample_frames walks the timeline at the configured rate") {
  VideoClip clip = constant_clip(250, Fps{25, 1});  // 10 s

  auto once_per_second = sample_frames(clip, Seconds(1));
  REQUIRE(once_per_second.size() == 10);
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(once_per_second[k].time == Seconds(static_cast<std::int64_t>(k)));
    CHECK(once_per_second[k].frame_index == 25 * k);
  }

  auto every_frame = sample_frames(clip, Seconds(25));
  REQUIRE(every_frame.size() == 250);
  for (std::size_t k = 0; k < 250; ++k) CHECK(every_frame[k].frame_index == k);

  // An insert-mode output of 10.2 s picks up one extra sample at t = 10.
  VideoClip longer = constant_clip(255, Fps{25, 1});
  CHECK(sample_frames(longer, Seconds(1)).size() == 11);

  CHECK_THROWS_AS(sample_frames(clip, Seconds(0)), Error);
}

TEST_CASE("detect_shots fires on feature jumps only") {
  const auto& world = default_world();

  auto constant = sampled_features(constant_clip(100, Fps{25, 1}), Seconds(1));
  CHECK(detect_shots(constant, 0.4).empty());

  auto corpus = sampled_features(world.clip, Seconds(1));
  std::vector<std::size_t> boundaries = detect_shots(corpus, 0.4);
  CHECK(boundaries == std::vector<std::size_t>{20, 40});

  // Replacing every sampled frame with one fixed image removes all boundaries.
  AttackConfig cfg = AttackConfig::make(attack_image("car"), Seconds(1), Seconds(0),
                                        AttackMode::Replace);
  auto attacked = sampled_features(apply_attack(world.clip, cfg), Seconds(1));
  CHECK(detect_shots(attacked, 0.4).empty());
}

TEST_CASE("annotate reproduces the corpus structure") {
  const auto& world = default_world();
  AnnotatorConfig config;
  AnnotationResult result = annotate(world.clip, world.model, config);

  check_partition(result, world.clip.duration());
  REQUIRE(result.shots.size() == 3);
  CHECK(result.shot_changes[0] == Seconds(20));
  CHECK(result.shot_changes[1] == Seconds(40));

  std::set<std::string> reported;
  for (const LabelScore& s : result.video_labels) reported.insert(s.label);
  for (const GroundTruthEntry& e : world.ground_truth) {
    CHECK(reported.count(e.label) == 1);
  }
  for (const std::string& attack_label : {"car", "building", "pasta", "laptop"}) {
    CHECK(reported.count(attack_label) == 0);
  }

  // Count-weighted scores live in [0,1] and total at most 1.
  double total = 0.0;
  for (const LabelScore& s : result.video_labels) {
    CHECK(s.confidence >= 0.0);
    CHECK(s.confidence <= 1.0);
    total += s.confidence;
  }
  CHECK(total <= 1.0 + 1e-9);

  // Shot labels match the ground truth scene order.
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(!result.shots[i].labels.empty());
    CHECK(result.shots[i].labels[0].label == world.ground_truth[i].label);
  }
}

TEST_CASE("annotate on a single flat scene") {
  const auto& world = default_world();
  CorpusSpec spec = world.spec;
  spec.scenes = {spec.scenes[0]};  // canyon only, 20 s
  VideoClip clip = generate_clip(spec).clip;

  AnnotationResult result = annotate(clip, world.model, AnnotatorConfig{});
  CHECK(result.shots.size() == 1);
  REQUIRE(!result.video_labels.empty());
  CHECK(result.video_labels[0].label == "canyon");
  CHECK(result.video_labels[0].confidence >= 0.99);
}

TEST_CASE("replacing every sampled frame reaches the total domination endpoint") {
  const auto& world = default_world();
  AttackConfig cfg = AttackConfig::make(attack_image("car"), Seconds(1), Seconds(0),
                                        AttackMode::Replace);
  AnnotationResult result =
      annotate(apply_attack(world.clip, cfg), world.model, AnnotatorConfig{});
  REQUIRE(result.shots.size() == 1);
  CHECK(result.video_labels[0].label == "car");
  CHECK(result.shots[0].labels[0].label == "car");
}

TEST_CASE("aligned period-2 attack reaches at least plurality") {
  const auto& world = default_world();
  AttackConfig cfg = AttackConfig::make(attack_image("car"), Seconds(2), Seconds(0),
                                        AttackMode::Replace);
  AnnotationResult result =
      annotate(apply_attack(world.clip, cfg), world.model, AnnotatorConfig{});
  check_partition(result, world.clip.duration());

  double car_score = 0.0;
  for (const LabelScore& s : result.video_labels) {
    if (s.label == "car") car_score = s.confidence;
  }
  for (const LabelScore& s : result.video_labels) {
    if (s.label != "car") CHECK(car_score >= s.confidence);
  }
}

TEST_CASE("annotate ignores frames between sampling instants") {
  const auto& world = default_world();
  VideoClip clip = world.clip;  // working copy
  AnnotatorConfig config;
  const std::string baseline = annotation_to_json(annotate(clip, world.model, config));

  std::set<std::size_t> sampled;
  for (const SampledFrame& s : sample_frames(clip, config.sample_rate)) {
    sampled.insert(s.frame_index);
  }

  std::mt19937 rng(31337);
  for (int edit = 0; edit < 20; ++edit) {
    std::size_t index = rng() % clip.frame_count();
    while (sampled.count(index)) index = rng() % clip.frame_count();

    Frame saved = clip.frames()[index];
    Frame garbage(clip.width(), clip.height());
    for (std::uint32_t y = 0; y < clip.height(); ++y)
      for (std::uint32_t x = 0; x < clip.width(); ++x)
        garbage.set_rgb(x, y, rng() & 0xff, rng() & 0xff, rng() & 0xff);
    clip.frames()[index] = garbage;

    CHECK(annotation_to_json(annotate(clip, world.model, config)) == baseline);
    clip.frames()[index] = saved;
  }
}

TEST_CASE("annotation JSON carries the exact wire field names") {
  const auto& world = default_world();
  std::string json = annotation_to_json(annotate(world.clip, world.model,
                                                 AnnotatorConfig{}));
  CHECK(json.find("\"videoLabels\"") != std::string::npos);
  CHECK(json.find("\"shots\"") != std::string::npos);
  CHECK(json.find("\"shotChanges\"") != std::string::npos);
  CHECK(json.find("\"startTime\"") != std::string::npos);
  CHECK(json.find("\"endTime\"") != std::string::npos);
  CHECK(json.find("\"description\"") != std::string::npos);
  CHECK(json.find("\"confidence\"") != std::string::npos);
  CHECK(json.find("failOpen") == std::string::npos);  // only when triggered
}

TEST_CASE("annotate validates its configuration") {
  const auto& world = default_world();
  AnnotatorConfig bad;
  bad.shot_threshold = 2.5;
  CHECK_THROWS_AS(annotate(world.clip, world.model, bad), Error);
  bad = AnnotatorConfig{};
  bad.top_k_video = 0;
  CHECK_THROWS_AS(annotate(world.clip, world.model, bad), Error);
}
