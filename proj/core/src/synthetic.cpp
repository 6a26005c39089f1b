#include "shapedc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace shapedc {
namespace {

// Cut positions splitting [0, extent) into pieces of length in [lo, hi];
// a final remainder shorter than lo is folded into the previous piece.
std::vector<int> random_cuts(int extent, int lo, int hi, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(lo, hi);
  std::vector<int> cuts{0};
  while (cuts.back() < extent) cuts.push_back(cuts.back() + len(rng));
  cuts.back() = extent;
  if (cuts.size() > 2 && cuts[cuts.size() - 1] - cuts[cuts.size() - 2] < lo) cuts.erase(cuts.end() - 2);
  return cuts;
}

int piece_of(const std::vector<int>& cuts, int x) {
  return static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), x) - cuts.begin()) - 1;
}

}  // namespace

SyntheticScene make_synthetic_scene(const SynthOptions& o) {
  if (o.height < 1 || o.width < 1 || o.bands < 2) throw Error("synthetic scene needs >= 1x1 pixels and >= 2 bands");
  if (o.classes < 1) throw Error("synthetic scene needs at least one class");
  if (o.block_min < 1 || o.block_max < o.block_min) throw Error("invalid block size range");
  if (!(o.noise_sigma >= 0.0) || !(o.separation > 0.0)) throw Error("noise must be nonnegative and separation positive");
  if (o.train_per_class < 1) throw Error("train_per_class must be >= 1");

  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Class layout.
  SyntheticScene scene;
  scene.truth = LabelMap(o.height, o.width);
  const int diag_extent = o.height + o.width;
  const bool diagonal = o.layout == SceneLayout::diagonal;
  // Rotated coordinates advance sqrt(2) per pixel of perpendicular distance,
  // so diagonal blocks get proportionally longer cuts.
  const int lo = diagonal ? static_cast<int>(std::lround(o.block_min * std::sqrt(2.0))) : o.block_min;
  const int hi = diagonal ? static_cast<int>(std::lround(o.block_max * std::sqrt(2.0))) : o.block_max;
  const auto row_cuts = random_cuts(diagonal ? diag_extent : o.height, lo, hi, rng);
  const auto col_cuts = random_cuts(diagonal ? diag_extent : o.width, lo, hi, rng);
  const int n_rows = static_cast<int>(row_cuts.size()) - 1;
  const int n_cols = static_cast<int>(col_cuts.size()) - 1;
  std::vector<int> cell_class(static_cast<std::size_t>(n_rows * n_cols));
  std::uniform_int_distribution<int> pick_class(1, o.classes);
  for (auto& c : cell_class) c = pick_class(rng);

  auto paint = [&] {
    for (int r = 0; r < o.height; ++r) {
      for (int c = 0; c < o.width; ++c) {
        const int u = diagonal ? r + c : r;
        const int v = diagonal ? r - c + o.width - 1 : c;
        const int cell = piece_of(row_cuts, u) * n_cols + piece_of(col_cuts, v);
        scene.truth.set(r, c, cell_class[static_cast<std::size_t>(cell)]);
      }
    }
  };
  paint();
  // Every class needs enough pixels for its training sample; reassign the
  // first cells in scan order until that holds.
  for (int k = 1; k <= o.classes; ++k) {
    auto count = [&] { return std::count(scene.truth.values().begin(), scene.truth.values().end(), k); };
    for (std::size_t cell = 0; count() < o.train_per_class + 1 && cell < cell_class.size(); ++cell) {
      const int old = cell_class[cell];
      if (old == k) continue;
      if (std::count(cell_class.begin(), cell_class.end(), old) <= 1) continue;
      cell_class[cell] = k;
      paint();
    }
    if (count() < o.train_per_class + 1) {
      throw Error("synthetic scene too small for " + std::to_string(o.classes) + " classes");
    }
  }

  // Class means, rescaled so the closest pair sits exactly at the requested separation.
  scene.class_means.assign(static_cast<std::size_t>(o.classes), std::vector<double>(static_cast<std::size_t>(o.bands)));
  for (auto& mean : scene.class_means) {
    for (auto& v : mean) v = gauss(rng);
  }
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < scene.class_means.size(); ++a) {
    for (std::size_t b = a + 1; b < scene.class_means.size(); ++b) {
      double d2 = 0.0;
      for (int i = 0; i < o.bands; ++i) {
        const double d = scene.class_means[a][static_cast<std::size_t>(i)] - scene.class_means[b][static_cast<std::size_t>(i)];
        d2 += d * d;
      }
      closest = std::min(closest, std::sqrt(d2));
    }
  }
  if (std::isfinite(closest) && closest > 0.0 && o.noise_sigma > 0.0) {
    const double scale = o.separation * o.noise_sigma / closest;
    for (auto& mean : scene.class_means) {
      for (auto& v : mean) v *= scale;
    }
  }

  std::vector<double> values(static_cast<std::size_t>(o.height) * static_cast<std::size_t>(o.width) *
                             static_cast<std::size_t>(o.bands));
  std::size_t i = 0;
  for (int r = 0; r < o.height; ++r) {
    for (int c = 0; c < o.width; ++c) {
      const auto& mean = scene.class_means[static_cast<std::size_t>(scene.truth.at(r, c) - 1)];
      for (int b = 0; b < o.bands; ++b) values[i++] = mean[static_cast<std::size_t>(b)] + o.noise_sigma * gauss(rng);
    }
  }
  scene.cube = HyperCube::from_pixel_interleaved(o.height, o.width, o.bands, std::move(values));

  // Stratified training sample; everything else labeled is test data.
  scene.train = LabelMap(o.height, o.width);
  scene.test = scene.truth;
  for (int k = 1; k <= o.classes; ++k) {
    std::vector<int> pixels;
    for (int p = 0; p < o.height * o.width; ++p) {
      if (scene.truth.values()[static_cast<std::size_t>(p)] == k) pixels.push_back(p);
    }
    std::shuffle(pixels.begin(), pixels.end(), rng);
    for (int t = 0; t < o.train_per_class; ++t) {
      const int p = pixels[static_cast<std::size_t>(t)];
      scene.train.set(p / o.width, p % o.width, k);
      scene.test.set(p / o.width, p % o.width, 0);
    }
  }
  return scene;
}

}  // namespace shapedc
