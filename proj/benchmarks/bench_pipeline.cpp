#include "shapedc/shapedc.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace shapedc;

namespace {

const SyntheticScene& scene() {
  static const SyntheticScene s = make_synthetic_scene({});
  return s;
}

const HyperCube& normalized() {
  static const HyperCube c = z_normalize(scene().cube);
  return c;
}

}  // namespace

static void BM_Omp(benchmark::State& state) {
  const int rows = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Eigen::MatrixXd d(rows, 10);
  for (Eigen::Index i = 0; i < d.size(); ++i) d.data()[i] = g(rng);
  Eigen::VectorXd x = d.col(2) - 0.5 * d.col(7);
  for (auto _ : state) benchmark::DoNotOptimize(omp(d, x, {3, 1e-9, 1e-12}));
}
BENCHMARK(BM_Omp)->Arg(81 * 8)->Arg(81 * 200);

static void BM_PatchDictionary(benchmark::State& state) {
  const auto train = TrainingSet::from_mask(normalized(), scene().train);
  const auto set = haar_shapelets(9, 10);
  const auto px = extract_patch_pixels(normalized(), {20, 20}, PatchGeometry(9));
  for (auto _ : state) benchmark::DoNotOptimize(build_patch_dictionary(px, set, train, {}));
}
BENCHMARK(BM_PatchDictionary);

static void BM_Slic(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(slic_segment(normalized()));
}
BENCHMARK(BM_Slic)->Unit(benchmark::kMillisecond);

static void BM_LearnShapelets(benchmark::State& state) {
  const auto seg = slic_segment(normalized());
  for (auto _ : state) benchmark::DoNotOptimize(learn_shapelets(seg.labels, PatchGeometry(9), {}));
}
BENCHMARK(BM_LearnShapelets)->Unit(benchmark::kMillisecond);

static void BM_ClassifyScene(benchmark::State& state) {
  const auto train = TrainingSet::from_mask(normalized(), scene().train);
  const auto set = haar_shapelets(9, 10);
  ClassifyOptions opts;
  opts.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(classify_image(normalized(), train, set, opts));
}
BENCHMARK(BM_ClassifyScene)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
