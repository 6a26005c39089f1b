#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace shapedc;

TEST_CASE("patch votes") {
  const ResidualMatrix r{{0.0, 2.0, std::nullopt}};
  const auto v = patch_votes(r);
  CHECK(v[0] == doctest::Approx(1e6));
  CHECK(v[1] == 0.5);
  CHECK(v[2] == 0.0);
  CHECK_THROWS_AS(patch_votes(r, 0.0), Error);
}

TEST_CASE("accumulate on an exact-size image copies the patch votes") {
  VoteField f(2, 2, 2);
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8};
  accumulate(f, {0, 0}, 2, v);
  CHECK(std::vector<double>(f.votes().begin(), f.votes().end()) == v);
  CHECK(f.coverage(1, 1) == 1);
  CHECK_THROWS_AS(accumulate(f, {1, 0}, 2, v), Error);
  CHECK_THROWS_AS(accumulate(f, {0, 0}, 2, std::vector<double>(3)), Error);
}

TEST_CASE("overlapping votes add up") {
  VoteField f(1, 3, 2);
  accumulate(f, {0, 0}, 1, {1.0, 0.0});
  accumulate(f, {0, 0}, 1, {0.0, 1.0});
  CHECK(f.vote(0, 0, 1) == 1.0);
  CHECK(f.vote(0, 0, 2) == 1.0);
  CHECK(f.coverage(0, 0) == 2);
  CHECK(f.coverage(0, 1) == 0);
}

TEST_CASE("accumulation order does not matter for exactly representable votes") {
  VoteField a(3, 3, 2), b(3, 3, 2);
  const std::vector<double> p{1, 0, 0, 2, 0.5, 0.5, 4, 0};
  const std::vector<double> q{0, 1, 3, 0, 0.25, 1, 0, 8};
  a.accumulate({0, 0}, 2, p);
  a.accumulate({1, 1}, 2, q);
  b.accumulate({1, 1}, 2, q);
  b.accumulate({0, 0}, 2, p);
  CHECK(a == b);
}

TEST_CASE("finalize") {
  VoteField f(1, 3, 2);
  accumulate(f, {0, 0}, 1, {3.0, 1.0});
  accumulate(f, {0, 1}, 1, {2.0, 2.0});
  const auto map = finalize(f);
  CHECK(map.at(0, 0) == 1);
  CHECK(map.at(0, 1) == 1);
  CHECK(map.at(0, 2) == 0);
}

TEST_CASE("image tiled from one class is labeled that class everywhere") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> spectra(6, std::vector<double>(5));
  for (auto& s : spectra)
    for (auto& v : s) v = g(rng);
  const auto t = validate_training_set(spectra, {1, 2, 1, 2, 3, 3}, 5);
  std::vector<double> values;
  std::uniform_int_distribution<int> pick(0, 1);
  for (int p = 0; p < 12 * 12; ++p) {
    const auto& s = spectra[static_cast<std::size_t>(2 * pick(rng))];
    values.insert(values.end(), s.begin(), s.end());
  }
  const auto cube = HyperCube::from_pixel_interleaved(12, 12, 5, values);
  const auto set = haar_shapelets(4, 5);
  ClassifyOptions opts;
  const auto map = classify_image(cube, t, set, opts);
  for (const int y : map.values()) CHECK(y == 1);

  PatchClassifier pc(t, set, opts);
  const auto r = pc.classify_patch(cube, {3, 4});
  for (const int c : r.code.selected)
    for (const int y : r.dictionary.pixel_labels[static_cast<std::size_t>(c)]) CHECK(y == 1);
}

TEST_CASE("two-class blocky scene is classified almost perfectly") {
  SynthOptions so;
  so.classes = 2;
  so.seed = 9;
  const auto scene = make_synthetic_scene(so);
  const auto cube = z_normalize(scene.cube);
  const auto seg = slic_segment(cube);
  const auto set = learn_shapelets(seg.labels, PatchGeometry(9), {});
  const auto train = TrainingSet::from_mask(cube, scene.train);
  const auto map = classify_image(cube, train, set, {});
  CHECK(evaluate(map, scene.test, 2).overall >= 0.99);
}

TEST_CASE("property: vote fields are finite, nonnegative, fully covered and worker-count invariant") {
  std::mt19937_64 rng(42);
  const auto cube = z_normalize(shapedc::testing::random_cube(14, 13, 4, rng));
  LabelMap mask(14, 13);
  for (int i = 0; i < 9; ++i) mask.set(i, (i * 5) % 13, i % 3 + 1);
  const auto t = TrainingSet::from_mask(cube, mask);
  const auto set = haar_shapelets(5, 7);
  ClassifyOptions one;
  ClassifyOptions many;
  many.workers = 5;
  const auto a = classify_votes(cube, t, set, one);
  const auto b = classify_votes(cube, t, set, many);
  CHECK(a == b);
  for (const double v : a.votes()) {
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
  }
  for (int r = 0; r < 14; ++r)
    for (int c = 0; c < 13; ++c) CHECK(a.coverage(r, c) >= 1);
  CHECK(a.coverage(7, 7) == 25);
}

TEST_CASE("classification preconditions") {
  std::mt19937_64 rng(43);
  const auto cube = shapedc::testing::random_cube(8, 8, 3, rng);
  const auto t = validate_training_set({{1, 2, 3, 4}}, {1}, 4);
  CHECK_THROWS_AS(classify_image(cube, t, haar_shapelets(3, 1), {}), Error);
  const auto t3 = validate_training_set({{1, 2, 3}}, {1}, 3);
  CHECK_THROWS_AS(classify_image(cube, t3, haar_shapelets(9, 1), {}), Error);
  ClassifyOptions bad;
  bad.sparsity = 0;
  CHECK_THROWS_AS(classify_image(cube, t3, haar_shapelets(3, 1), bad), Error);
}
