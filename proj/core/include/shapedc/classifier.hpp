#pragma once

#include "shapedc/mrf_dictionary.hpp"
#include "shapedc/sparse_coding.hpp"
#include "shapedc/types.hpp"

#include <vector>

namespace shapedc {

/// Per-pixel, per-class accumulated votes plus the number of patches that
/// voted on each pixel.
class VoteField {
 public:
  VoteField(int height, int width, int class_count);

  int height() const { return height_; }
  int width() const { return width_; }
  int class_count() const { return class_count_; }
  double vote(int row, int col, int k) const { return votes_[index(row, col) * k_stride() + static_cast<std::size_t>(k - 1)]; }
  int coverage(int row, int col) const { return coverage_[index(row, col)]; }
  std::span<const double> votes() const { return votes_; }

  /// Adds a patch's Z x K vote matrix (flat, pixel-major) at `anchor`.
  void accumulate(PixelCoord anchor, int side, const std::vector<double>& patch_votes);

  friend bool operator==(const VoteField&, const VoteField&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
  }
  std::size_t k_stride() const { return static_cast<std::size_t>(class_count_); }

  int height_;
  int width_;
  int class_count_;
  std::vector<double> votes_;
  std::vector<int> coverage_;
};

/// v = 1 / max(r, vote_eps) for present classes, 0 for absent ones.
/// Returns a flat Z x K matrix, pixel-major.
std::vector<double> patch_votes(const ResidualMatrix& residuals, double vote_eps = 1e-6);

/// Free-function form of VoteField::accumulate.
void accumulate(VoteField& field, PixelCoord anchor, int side, const std::vector<double>& patch_votes);

/// Highest-voted class per pixel (lowest id on ties); 0 where nothing voted.
LabelMap finalize(const VoteField& field);

struct ClassifyOptions {
  int sparsity = 3;        // W
  MrfConfig mrf;
  double vote_eps = 1e-6;
  int workers = 1;
};

/// Everything one patch contributes, kept for inspection and tests.
struct PatchResult {
  PatchDictionary dictionary;
  SparseCode code;
  ResidualMatrix residuals;
  std::vector<double> votes;
};

/// Reusable per-image state: the standardized training spectra.
class PatchClassifier {
 public:
  PatchClassifier(const TrainingSet& training, const ShapeletSet& shapelets, const ClassifyOptions& options);

  PatchResult classify_patch(const HyperCube& cube, PixelCoord anchor) const;

 private:
  const TrainingSet& training_;
  const ShapeletSet& shapelets_;
  ClassifyOptions options_;
  PatchGeometry geometry_;
  StandardizedSpectra standardized_;
};

/// Codes every fully interior patch and sums the votes. Patches are processed
/// in parallel but their votes are added in row-major anchor order, so the
/// field is bit-identical for any worker count.
VoteField classify_votes(const HyperCube& cube, const TrainingSet& training, const ShapeletSet& shapelets,
                         const ClassifyOptions& options);

LabelMap classify_image(const HyperCube& cube, const TrainingSet& training, const ShapeletSet& shapelets,
                        const ClassifyOptions& options);

}  // namespace shapedc
