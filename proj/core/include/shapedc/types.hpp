#pragma once

// Core domain types shared by every stage of the shapelet-based
// sparse-representation classifier.
//
// Conventions used throughout the library:
//   * Class ids are 1-based; 0 means "unlabeled" in every label map.
//   * Training-sample, column, pixel and region *indices* are 0-based.
//   * A vectorized patch stores pixel z (row-major inside the patch) in the
//     contiguous row block [z*M, (z+1)*M).

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shapedc {

/// Every fallible constructor and I/O routine throws this, with a message
/// naming the violated invariant.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PixelCoord {
  int row = 0;
  int col = 0;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// M-band image raster. Storage is pixel-interleaved so a pixel's spectrum is
/// a contiguous span.
class HyperCube {
 public:
  HyperCube() = default;

  /// `values` must be pixel-interleaved: ((row * width) + col) * bands + band.
  static HyperCube from_pixel_interleaved(int height, int width, int bands,
                                          std::vector<double> values);

  int height() const { return height_; }
  int width() const { return width_; }
  int bands() const { return bands_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }

  double at(int row, int col, int band) const {
    return values_[offset(row, col) + static_cast<std::size_t>(band)];
  }
  std::span<const double> pixel(int row, int col) const {
    return {values_.data() + offset(row, col), static_cast<std::size_t>(bands_)};
  }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t offset(int row, int col) const {
    return (static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(col)) *
           static_cast<std::size_t>(bands_);
  }

  int height_ = 0;
  int width_ = 0;
  int bands_ = 0;
  std::vector<double> values_;
};

/// Per-pixel class ids; 0 = unlabeled, 1..K = classes.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int height, int width, int fill = 0);
  static LabelMap from_values(int height, int width, std::vector<int> values);

  int height() const { return height_; }
  int width() const { return width_; }
  int at(int row, int col) const { return values_[index(row, col)]; }
  void set(int row, int col, int label) { values_[index(row, col)] = label; }
  std::span<const int> values() const { return values_; }
  int max_label() const;

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<int> values_;
};

/// L labeled spectra. Column l of `spectra()` is training sample l.
class TrainingSet {
 public:
  TrainingSet() = default;

  /// Validates the invariants: L >= 1, every spectrum has length `bands`,
  /// labels lie in 1..K with K = max(labels), and no class in 1..K is empty.
  static TrainingSet create(const std::vector<std::vector<double>>& spectra,
                            const std::vector<int>& labels, int bands);
  static TrainingSet create(Eigen::MatrixXd spectra, std::vector<int> labels);

  /// Collects every pixel with a nonzero label in `mask`, row-major.
  static TrainingSet from_mask(const HyperCube& cube, const LabelMap& mask);

  int size() const { return static_cast<int>(labels_.size()); }
  int bands() const { return static_cast<int>(spectra_.rows()); }
  int class_count() const { return class_count_; }
  const Eigen::MatrixXd& spectra() const { return spectra_; }
  const std::vector<int>& labels() const { return labels_; }
  int label(int sample) const { return labels_[static_cast<std::size_t>(sample)]; }
  /// Lowest sample index carrying `class_id`.
  int first_sample_of(int class_id) const {
    return first_of_class_[static_cast<std::size_t>(class_id - 1)];
  }

 private:
  Eigen::MatrixXd spectra_;
  std::vector<int> labels_;
  std::vector<int> first_of_class_;
  int class_count_ = 0;
};

/// Square patch of side x side pixels.
class PatchGeometry {
 public:
  explicit PatchGeometry(int side);

  int side() const { return side_; }
  int pixel_count() const { return side_ * side_; }

 private:
  int side_;
};

/// Square region map with ids 1..R, each id present at least once.
class Shapelet {
 public:
  Shapelet() = default;
  static Shapelet from_region_map(int side, std::vector<int> region_map);

  int side() const { return side_; }
  int region_count() const { return region_count_; }
  int region_at(int pixel) const { return region_map_[static_cast<std::size_t>(pixel)]; }
  std::span<const int> region_map() const { return region_map_; }
  /// Patch-pixel indices of region r (0-based r; region id r + 1).
  const std::vector<int>& region_pixels(int r) const {
    return regions_[static_cast<std::size_t>(r)];
  }

  friend bool operator==(const Shapelet& a, const Shapelet& b) {
    return a.side_ == b.side_ && a.region_map_ == b.region_map_;
  }

 private:
  int side_ = 0;
  int region_count_ = 0;
  std::vector<int> region_map_;
  std::vector<std::vector<int>> regions_;
};

class ShapeletSet {
 public:
  ShapeletSet() = default;
  explicit ShapeletSet(std::vector<Shapelet> shapelets);

  int size() const { return static_cast<int>(shapelets_.size()); }
  int side() const { return shapelets_.front().side(); }
  const Shapelet& operator[](int n) const { return shapelets_[static_cast<std::size_t>(n)]; }
  const std::vector<Shapelet>& shapelets() const { return shapelets_; }

  friend bool operator==(const ShapeletSet&, const ShapeletSet&) = default;

 private:
  std::vector<Shapelet> shapelets_;
};

/// Weights of the dictionary-construction energy: gamma scales the
/// region-histogram prior, omega the pixel/region label disagreement penalty.
struct MrfConfig {
  double gamma = 1.0;
  double omega = 1.0;

  void validate() const;
};

/// Patch-specific spatial-spectral dictionary. Column c stacks, for every
/// patch pixel z, the training spectrum source_indices[c][z].
struct PatchDictionary {
  Eigen::MatrixXd atoms;                          // (Z*M) x N'
  std::vector<std::vector<int>> pixel_labels;     // N' x Z class ids
  std::vector<std::vector<int>> source_indices;   // N' x Z sample indices

  int column_count() const { return static_cast<int>(atoms.cols()); }
};

struct SparseCode {
  std::vector<int> selected;        // column indices, selection order
  std::vector<double> coefficients; // w.r.t. the original columns
  double residual_norm = 0.0;
  /// Residual norm before the first atom and after every accepted atom.
  std::vector<double> residual_history;
};

/// Free-function form of TrainingSet::create.
TrainingSet validate_training_set(const std::vector<std::vector<double>>& spectra,
                                  const std::vector<int>& labels, int bands);

}  // namespace shapedc
