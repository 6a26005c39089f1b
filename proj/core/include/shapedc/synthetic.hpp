#pragma once

#include "shapedc/types.hpp"

#include <cstdint>
#include <vector>

namespace shapedc {

enum class SceneLayout {
  blocky,    // axis-aligned rectangular blocks
  diagonal,  // blocks in coordinates rotated by 45 degrees
};

struct SynthOptions {
  int height = 60;
  int width = 60;
  int bands = 8;
  int classes = 3;
  int block_min = 10;  // block edge lengths are drawn from [block_min, block_max]
  int block_max = 20;
  double noise_sigma = 0.1;
  /// Class means are rescaled so the closest pair is exactly
  /// `separation * noise_sigma` apart (Euclidean, over all bands).
  double separation = 5.0;
  int train_per_class = 20;
  SceneLayout layout = SceneLayout::blocky;
  std::uint64_t seed = 1;
};

struct SyntheticScene {
  HyperCube cube;
  LabelMap truth;
  LabelMap train;  // train_per_class pixels per class
  LabelMap test;   // every labeled pixel not in `train`
  std::vector<std::vector<double>> class_means;
};

/// Piecewise-constant class layout with i.i.d. Gaussian noise around
/// per-class mean spectra. Deterministic for a given seed.
SyntheticScene make_synthetic_scene(const SynthOptions& options);

}  // namespace shapedc
