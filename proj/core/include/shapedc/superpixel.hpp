#pragma once

#include "shapedc/types.hpp"

#include <vector>

namespace shapedc {

/// Segment ids are 1-based, every id in 1..segment_count occurs, and each
/// segment is a single 4-connected component.
struct Segmentation {
  LabelMap labels;
  int segment_count = 0;
};

struct SlicOptions {
  int target_size = 20;      // approximate superpixel side, pixels
  double compactness = 1.0;  // weight of the spatial term
  int iterations = 10;
  int workers = 1;
};

/// Lloyd-style SLIC over all bands of a (normalized) cube. The distance is
/// D^2 = d_spectral^2 + (compactness / target_size)^2 * d_spatial^2.
///
/// Exposed step by step so the iteration can be inspected; slic_segment()
/// is the normal entry point.
class SlicSolver {
 public:
  struct Center {
    std::vector<double> spectrum;
    double row = 0.0;
    double col = 0.0;
  };

  SlicSolver(const HyperCube& cube, const SlicOptions& options);

  /// Assigns every pixel to the nearest center among those within
  /// +-target_size of it; its current center is always a candidate, so the
  /// objective never increases for fixed centers.
  void assign();
  /// Moves each center to the mean of its pixels (empty clusters stay put).
  /// Accumulation is serial in pixel order.
  void update();
  /// Sum over pixels of D^2 to the assigned center.
  double objective() const;

  const std::vector<int>& assignment() const { return assignment_; }
  const std::vector<Center>& centers() const { return centers_; }

 private:
  double distance2(int pixel, const Center& center) const;

  const HyperCube& cube_;
  SlicOptions options_;
  double spatial_weight2_;
  std::vector<Center> centers_;
  std::vector<int> assignment_;  // center index per pixel, -1 before the first assign()
};

/// Full segmentation: grid seeding (perturbed to the lowest-gradient pixel
/// in a 3x3 neighborhood), a fixed number of assign/update rounds, then
/// connectivity enforcement with min_size = target_size^2 / 4.
Segmentation slic_segment(const HyperCube& cube, const SlicOptions& options = {});

/// Splits every label into its 4-connected components. Orphans, components
/// with fewer than `min_size` pixels, are merged into the adjacent segment
/// with the most pixels; the result is relabeled 1..n in row-major
/// first-occurrence order.
Segmentation enforce_connectivity(const std::vector<int>& labels, int height, int width, int min_size);

/// True if every id of `labels` forms one 4-connected component.
bool segments_are_connected(const LabelMap& labels);

}  // namespace shapedc
