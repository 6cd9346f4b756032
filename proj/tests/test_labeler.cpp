#include <doctest.h>

#include <random>
#include <vector>

#include "test_support.hpp"
#include "vidshield/error.hpp"
#include "vidshield/labeler.hpp"

using namespace vidshield;
using vidshield::testing::solid_frame;

namespace {

FeatureVector random_feature(std::mt19937& rng) {
  FeatureVector f{};
  double total = 0.0;
  for (double& v : f) {
    v = static_cast<double>(rng()) / 4294967296.0;
    total += v;
  }
  for (double& v : f) v /= total;
  return f;
}

}  // namespace

TEST_CASE("extract_features bins and normalization") {
  FeatureVector black = extract_features(solid_frame(8, 8, 0, 0, 0));
  CHECK(black[0] == doctest::Approx(1.0));
  for (std::size_t i = 1; i < kFeatureBins; ++i) CHECK(black[i] == 0.0);

  // Half red (255,0,0) -> bin 48, half blue (0,0,255) -> bin 3.
  Frame half(2, 1);
  half.set_rgb(0, 0, 255, 0, 0);
  half.set_rgb(1, 0, 0, 0, 255);
  FeatureVector f = extract_features(half);
  CHECK(f[48] == doctest::Approx(0.5));
  CHECK(f[3] == doctest::Approx(0.5));

  std::mt19937 rng(123);
  for (int trial = 0; trial < 25; ++trial) {
    Frame noisy(16, 16);
    for (std::uint32_t y = 0; y < 16; ++y)
      for (std::uint32_t x = 0; x < 16; ++x)
        noisy.set_rgb(x, y, rng() & 0xff, rng() & 0xff, rng() & 0xff);
    FeatureVector nf = extract_features(noisy);
    double sum = 0.0;
    for (double v : nf) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("train builds per-label centroids") {
  Image red = solid_frame(4, 4, 200, 40, 40);
  Image blue = solid_frame(4, 4, 40, 90, 200);

  LabelModel two = train({{"red", red}, {"blue", blue}});
  CHECK(two.prototypes.at("red") == extract_features(red));
  CHECK(two.prototypes.at("blue") == extract_features(blue));

  // Two identical images collapse to the same prototype.
  LabelModel dup = train({{"red", red}, {"red", red}, {"blue", blue}});
  FeatureVector proto = dup.prototypes.at("red");
  FeatureVector single = extract_features(red);
  for (std::size_t i = 0; i < kFeatureBins; ++i) {
    CHECK(proto[i] == doctest::Approx(single[i]).epsilon(1e-12));
  }

  // Three distinct images: compare against an independently computed mean.
  Image mixed(2, 1);
  mixed.set_rgb(0, 0, 200, 40, 40);
  mixed.set_rgb(1, 0, 40, 90, 200);
  std::vector<Image> reds = {red, mixed, blue};
  LabelModel three = train({{"r", reds[0]}, {"r", reds[1]}, {"r", reds[2]},
                            {"other", solid_frame(4, 4, 240, 240, 240)}});
  FeatureVector expected{};
  for (const Image& img : reds) {
    FeatureVector f = extract_features(img);
    for (std::size_t i = 0; i < kFeatureBins; ++i) expected[i] += f[i] / 3.0;
  }
  FeatureVector got = three.prototypes.at("r");
  for (std::size_t i = 0; i < kFeatureBins; ++i) {
    CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  }

  CHECK_THROWS_AS(train({{"only", red}}), Error);
}

TEST_CASE("classify matches the softmax expression and the tie rule") {
  // Prototype A: pure bin 0. Prototype B at L1 distance exactly 0.5.
  FeatureVector a{};
  a[0] = 1.0;
  FeatureVector b{};
  b[0] = 0.75;
  b[1] = 0.25;
  LabelModel model;
  model.prototypes = {{"a", a}, {"b", b}};
  model.temperature = 0.05;

  auto ranked = classify(model, a);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].label == "a");
  double expected = 1.0 / (1.0 + std::exp(-0.5 / 0.05));
  CHECK(ranked[0].confidence == doctest::Approx(expected).epsilon(1e-12));
  CHECK(ranked[0].confidence >= 0.99);

  // Equidistant feature: both confidences 0.5, lexicographic winner on top.
  FeatureVector mid{};
  mid[0] = 0.875;
  mid[1] = 0.125;
  auto tied = classify(model, mid);
  CHECK(tied[0].label == "a");
  CHECK(tied[0].confidence == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(tied[1].confidence == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("classify confidences sum to one and rank by nearest prototype") {
  const LabelModel& model = vidshield::testing::default_world().model;
  std::mt19937 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    FeatureVector f = random_feature(rng);
    auto ranked = classify(model, f);
    REQUIRE(ranked.size() == model.prototypes.size());

    double sum = 0.0;
    for (const LabelScore& s : ranked) sum += s.confidence;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

    // Brute-force nearest prototype, ties to the smaller label.
    std::string best;
    double best_d = 1e300;
    for (const auto& [label, proto] : model.prototypes) {
      double d = l1_distance(f, proto);
      if (d < best_d) {
        best_d = d;
        best = label;
      }
    }
    CHECK(ranked[0].label == best);
  }
}

TEST_CASE("softmax is shift invariant and monotone") {
  std::vector<double> base = {0.3, 1.2, 0.05, 1.9};
  auto conf = confidences_from_distances(base, 0.05);
  for (double shift : {0.1, 0.5, 1.0, 10.0}) {
    std::vector<double> shifted = base;
    for (double& d : shifted) d += shift;
    auto conf2 = confidences_from_distances(shifted, 0.05);
    for (std::size_t i = 0; i < conf.size(); ++i) {
      CHECK(conf2[i] == doctest::Approx(conf[i]).epsilon(1e-9));
    }
  }
  CHECK(conf[2] > conf[0]);
  CHECK(conf[0] > conf[1]);
  CHECK(conf[1] > conf[3]);
}

TEST_CASE("model JSON round trip preserves every double") {
  const LabelModel& model = vidshield::testing::default_world().model;
  LabelModel reloaded = model_from_json(model_to_json(model));
  CHECK(reloaded.temperature == model.temperature);
  REQUIRE(reloaded.prototypes.size() == model.prototypes.size());
  for (const auto& [label, proto] : model.prototypes) {
    REQUIRE(reloaded.prototypes.count(label) == 1);
    CHECK(reloaded.prototypes.at(label) == proto);  // bitwise
  }

  CHECK_THROWS_AS(model_from_json("{}"), Error);
  CHECK_THROWS_AS(model_from_json("not json"), Error);
}
