#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace shapedc;

namespace {

// Reference/prediction maps realizing a given confusion matrix.
std::pair<LabelMap, LabelMap> maps_for(const std::vector<std::vector<int>>& confusion) {
  std::vector<int> ref, pred;
  for (std::size_t k = 0; k < confusion.size(); ++k) {
    for (std::size_t j = 0; j < confusion.size(); ++j) {
      for (int n = 0; n < confusion[k][j]; ++n) {
        ref.push_back(static_cast<int>(k) + 1);
        pred.push_back(static_cast<int>(j) + 1);
      }
    }
  }
  const int n = static_cast<int>(ref.size());
  return {LabelMap::from_values(1, n, pred), LabelMap::from_values(1, n, ref)};
}

}  // namespace

TEST_CASE("kappa of the [[45,5],[10,40]] confusion") {
  const auto [pred, ref] = maps_for({{45, 5}, {10, 40}});
  const auto r = evaluate(pred, ref, 2);
  CHECK(r.confusion[0][1] == 5);
  CHECK(r.confusion[1][0] == 10);
  CHECK(r.overall == doctest::Approx(0.85).epsilon(1e-12));
  CHECK(r.kappa == doctest::Approx(0.70).epsilon(1e-12));
  CHECK(*r.class_accuracy[0] == doctest::Approx(0.9));
  CHECK(*r.class_accuracy[1] == doctest::Approx(0.8));
  CHECK(r.average == doctest::Approx(0.85));
}

TEST_CASE("perfect agreement") {
  const auto ref = LabelMap::from_values(2, 3, {1, 2, 3, 0, 2, 1});
  const auto r = evaluate(ref, ref, 3);
  CHECK(r.overall == 1.0);
  CHECK(r.average == 1.0);
  CHECK(r.kappa == 1.0);
  CHECK(r.total() == 5);
}

TEST_CASE("constant predictor on balanced classes is chance level") {
  const auto [pred, ref] = maps_for({{50, 0}, {50, 0}});
  const auto r = evaluate(pred, ref, 2);
  CHECK(r.overall == doctest::Approx(0.5));
  CHECK(r.kappa == doctest::Approx(0.0));
}

TEST_CASE("evaluate ignores unlabeled reference pixels and counts unclassified predictions") {
  const auto ref = LabelMap::from_values(1, 4, {0, 1, 1, 2});
  const auto pred = LabelMap::from_values(1, 4, {2, 1, 0, 2});
  const auto r = evaluate(pred, ref, 2);
  CHECK(r.total() == 3);
  CHECK(r.unclassified[0] == 1);
  CHECK(r.overall == doctest::Approx(2.0 / 3.0));
  CHECK(*r.class_accuracy[0] == doctest::Approx(0.5));
}

TEST_CASE("classes absent from the reference are left out of the average") {
  const auto ref = LabelMap::from_values(1, 3, {1, 1, 3});
  const auto pred = LabelMap::from_values(1, 3, {1, 2, 3});
  const auto r = evaluate(pred, ref, 3);
  CHECK_FALSE(r.class_accuracy[1].has_value());
  CHECK(r.average == doctest::Approx((0.5 + 1.0) / 2.0));
}

TEST_CASE("evaluate errors") {
  const LabelMap a(2, 2, 1);
  CHECK_THROWS_AS(evaluate(a, LabelMap(2, 3, 1), 1), Error);
  CHECK_THROWS_AS(evaluate(a, LabelMap(2, 2, 0), 1), Error);
  CHECK_THROWS_AS(evaluate(LabelMap(2, 2, 3), LabelMap(2, 2, 1), 2), Error);
}

TEST_CASE("property: consistent class permutations leave the scores unchanged") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> label(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> ref(200), pred(200);
    for (auto& v : ref) v = label(rng);
    for (auto& v : pred) v = std::max(1, label(rng));
    if (std::all_of(ref.begin(), ref.end(), [](int v) { return v == 0; })) continue;
    std::vector<int> perm{1, 2, 3, 4};
    std::shuffle(perm.begin(), perm.end(), rng);
    auto apply = [&](std::vector<int> v) {
      for (auto& x : v) x = x == 0 ? 0 : perm[static_cast<std::size_t>(x - 1)];
      return v;
    };
    const auto a = evaluate(LabelMap::from_values(1, 200, pred), LabelMap::from_values(1, 200, ref), 4);
    const auto b = evaluate(LabelMap::from_values(1, 200, apply(pred)), LabelMap::from_values(1, 200, apply(ref)), 4);
    CHECK(a.overall == doctest::Approx(b.overall).epsilon(1e-12));
    CHECK(a.average == doctest::Approx(b.average).epsilon(1e-12));
    CHECK(a.kappa == doctest::Approx(b.kappa).epsilon(1e-12));
    for (int k = 0; k < 4; ++k) {
      for (int j = 0; j < 4; ++j) {
        CHECK(a.confusion[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] ==
              b.confusion[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)] - 1)]
                         [static_cast<std::size_t>(perm[static_cast<std::size_t>(j)] - 1)]);
      }
    }
    CHECK(a.overall >= 0.0);
    CHECK(a.overall <= 1.0);
    CHECK(a.kappa >= -1.0);
    CHECK(a.kappa <= 1.0);
  }
}

TEST_CASE("property: kappa is 1 exactly for diagonal confusions") {
  CHECK(report_from_confusion({{3, 0, 0}, {0, 0, 0}, {0, 0, 7}}).kappa == 1.0);
  CHECK(report_from_confusion({{3, 0}, {1, 7}}).kappa < 1.0);
  CHECK(report_from_confusion({{5}}).kappa == 1.0);
}
