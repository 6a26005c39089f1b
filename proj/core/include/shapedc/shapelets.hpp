#pragma once

#include "shapedc/superpixel.hpp"
#include "shapedc/types.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace shapedc {

/// side x side bit mask, pixels row-major, packed 64 per word.
class BinaryPatch {
 public:
  BinaryPatch() = default;
  explicit BinaryPatch(int side);
  /// `bits` holds side*side 0/1 values, row-major.
  static BinaryPatch from_values(int side, const std::vector<int>& bits);

  int side() const { return side_; }
  int pixel_count() const { return side_ * side_; }
  bool get(int pixel) const {
    return (words_[static_cast<std::size_t>(pixel) / 64] >> (static_cast<unsigned>(pixel) % 64)) & 1u;
  }
  void set(int pixel, bool value);
  std::vector<int> values() const;

  friend int hamming_distance(const BinaryPatch& a, const BinaryPatch& b);
  friend bool operator==(const BinaryPatch&, const BinaryPatch&) = default;

  struct Hash {
    std::size_t operator()(const BinaryPatch& p) const;
  };

 private:
  int side_ = 0;
  std::vector<std::uint64_t> words_;
};

int hamming_distance(const BinaryPatch& a, const BinaryPatch& b);

/// For every window (anchors sampled with `stride`, row-major) and every
/// segment present in it, a patch with 0 on that segment's pixels and 1
/// elsewhere. Exact duplicates are dropped, keeping first occurrences.
std::vector<BinaryPatch> extract_binary_patches(const LabelMap& segmentation,
                                                const PatchGeometry& geometry, int stride = 1);

struct KMedoidsOptions {
  int clusters = 10;
  int max_iter = 100;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct KMedoidsResult {
  std::vector<int> medoids;     // indices into the input, one per cluster
  std::vector<int> assignment;  // cluster index per input patch
  std::int64_t cost = 0;        // sum of Hamming distances to assigned medoids
  std::vector<std::int64_t> cost_history;  // after initialization and each round
  int iterations = 0;
  bool converged = false;
};

/// Alternating k-medoids under Hamming distance. Initialization is a
/// farthest-first sweep from a seeded random start. Each round assigns every
/// patch to its nearest medoid (lowest cluster index on ties), then moves each
/// medoid to the member minimizing total in-cluster distance (the current
/// medoid is kept on ties). Stops at a fixed point or after max_iter rounds.
/// Requires at least `clusters` distinct patches.
KMedoidsResult kmedoids(const std::vector<BinaryPatch>& patches, const KMedoidsOptions& options);

/// Regions of a shapelet are the 4-connected components of the mask (zero
/// and one areas alike), numbered 1..R in row-major first-occurrence order.
Shapelet binary_patch_to_shapelet(const BinaryPatch& patch);
ShapeletSet medoids_to_shapelets(const std::vector<BinaryPatch>& medoids);

/// Full learning pipeline: binary patches of the segmentation, k-medoids,
/// conversion of the medoids to shapelets.
ShapeletSet learn_shapelets(const LabelMap& segmentation, const PatchGeometry& geometry,
                            const KMedoidsOptions& options, int stride = 1);

/// Two-dimensional Haar basis as region maps, in a fixed order: the full
/// patch (scaling function), then per dyadic level the supports row-major
/// (whole patch, quadrants, sixteenths, ...) and per support the vertical,
/// horizontal and diagonal wavelet. A wavelet's two signed halves are regions;
/// pixels outside its support form a third. Levels stop once a support is
/// narrower than 2 pixels; asking for more shapelets than that is an error.
ShapeletSet haar_shapelets(int side, int count);
int max_haar_shapelets(int side);

}  // namespace shapedc
