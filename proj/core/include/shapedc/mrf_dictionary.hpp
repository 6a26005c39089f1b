#pragma once

// Patch-specific spatial-spectral dictionary construction.
//
// For one patch and one shapelet, a two-layer model picks a training sample
// for every patch pixel (pixel layer) and for every shapelet region (region
// layer) by minimizing
//
//   E = - sum_z corr(x_z, X(pb_z))
//       - gamma * sum_r h_r[y(sb_r)]
//       + omega * sum_r sum_{z in S_r} [y(pb_z) != y(sb_r)]
//
// where h_r is the histogram of nearest-neighbour label estimates inside
// region r. Each region node only touches its own pixels, so the graph is a
// forest of stars and the minimum is found exactly by enumerating the region
// class and letting every pixel choose independently.

#include "shapedc/types.hpp"

#include <vector>

namespace shapedc {

/// Training spectra centered and scaled to unit norm, so Pearson correlation
/// reduces to a dot product. Zero-variance spectra become zero columns and
/// therefore correlate 0 with everything.
class StandardizedSpectra {
 public:
  explicit StandardizedSpectra(const Eigen::MatrixXd& spectra);
  const Eigen::MatrixXd& matrix() const { return standardized_; }

 private:
  Eigen::MatrixXd standardized_;
};

/// Z x L Pearson correlations between the patch pixels (columns of an M x Z
/// matrix) and the training spectra. Requires M >= 2.
Eigen::MatrixXd pixel_correlations(const Eigen::MatrixXd& patch_pixels, const TrainingSet& training);
Eigen::MatrixXd pixel_correlations(const Eigen::MatrixXd& patch_pixels,
                                   const StandardizedSpectra& training_spectra);

/// Label of the most correlated training sample per pixel (lowest sample
/// index on ties).
std::vector<int> nn_label_estimate(const Eigen::MatrixXd& correlations, const TrainingSet& training);

/// Normalized class histogram (K entries) of the estimated labels at the
/// given patch pixels.
std::vector<double> region_histogram(const std::vector<int>& estimated_labels,
                                     const std::vector<int>& region_pixels, int class_count);

struct Assignment {
  std::vector<int> pixel_choice;   // training-sample index per patch pixel
  std::vector<int> region_choice;  // training-sample index per region
  double energy = 0.0;
};

/// R x K histograms of a shapelet's regions.
std::vector<std::vector<double>> region_histograms(const std::vector<int>& estimated_labels,
                                                   const Shapelet& shapelet, int class_count);

/// Energy of an explicit assignment. `histograms` is R x K.
double energy(const std::vector<int>& pixel_choice, const std::vector<int>& region_choice,
              const Eigen::MatrixXd& correlations, const std::vector<std::vector<double>>& histograms,
              const Shapelet& shapelet, const std::vector<int>& training_labels, const MrfConfig& config);

/// Per-patch sufficient statistics shared by every shapelet: for each pixel
/// and class the best-correlated sample of that class, and the nearest
/// neighbour label estimate.
class PatchEvidence {
 public:
  PatchEvidence(Eigen::MatrixXd correlations, const TrainingSet& training);

  int pixel_count() const { return static_cast<int>(correlations_.rows()); }
  int class_count() const { return class_count_; }
  const Eigen::MatrixXd& correlations() const { return correlations_; }
  const std::vector<int>& estimated_labels() const { return estimated_; }

  /// Highest correlation of pixel z with a sample of class k (1-based), and
  /// the lowest index attaining it.
  double best_corr(int z, int k) const { return best_corr_[flat(z, k)]; }
  int best_sample(int z, int k) const { return best_sample_[flat(z, k)]; }
  /// The two classes with the best (-corr, index) pairs at pixel z; the
  /// second is 0 when K == 1.
  int first_class(int z) const { return ranked_[static_cast<std::size_t>(z) * 2]; }
  int second_class(int z) const { return ranked_[static_cast<std::size_t>(z) * 2 + 1]; }

 private:
  std::size_t flat(int z, int k) const {
    return static_cast<std::size_t>(z) * static_cast<std::size_t>(class_count_) + static_cast<std::size_t>(k - 1);
  }

  Eigen::MatrixXd correlations_;
  int class_count_ = 0;
  std::vector<double> best_corr_;
  std::vector<int> best_sample_;
  std::vector<int> ranked_;
  std::vector<int> estimated_;
};

/// Exact minimizer of the energy. Ties go to the lowest region class and
/// then to the lowest sample index; the region sample is the first training
/// sample of the winning class.
Assignment infer_assignment(const PatchEvidence& evidence, const Shapelet& shapelet,
                            const TrainingSet& training, const MrfConfig& config);
Assignment infer_assignment(const Eigen::MatrixXd& correlations, const Shapelet& shapelet,
                            const TrainingSet& training, const MrfConfig& config);

/// One column per shapelet, pixel z filled with the chosen training
/// spectrum; columns with identical sample choices are dropped (first kept).
PatchDictionary build_patch_dictionary(const PatchEvidence& evidence, const ShapeletSet& shapelets,
                                       const TrainingSet& training, const MrfConfig& config);
PatchDictionary build_patch_dictionary(const Eigen::MatrixXd& patch_pixels, const ShapeletSet& shapelets,
                                       const TrainingSet& training, const MrfConfig& config);

}  // namespace shapedc
