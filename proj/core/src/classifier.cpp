#include "shapedc/classifier.hpp"

#include "shapedc/parallel.hpp"
#include "shapedc/preprocess.hpp"

#include <algorithm>
#include <string>

namespace shapedc {

VoteField::VoteField(int height, int width, int class_count)
    : height_(height), width_(width), class_count_(class_count) {
  if (height < 1 || width < 1 || class_count < 1) throw Error("vote field dimensions must be >= 1");
  votes_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width) * k_stride(), 0.0);
  coverage_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), 0);
}

void VoteField::accumulate(PixelCoord anchor, int side, const std::vector<double>& patch_votes) {
  if (anchor.row < 0 || anchor.col < 0 || anchor.row + side > height_ || anchor.col + side > width_) {
    throw Error("vote patch anchor is not interior");
  }
  if (patch_votes.size() != static_cast<std::size_t>(side) * static_cast<std::size_t>(side) * k_stride()) {
    throw Error("patch vote matrix has the wrong size");
  }
  for (int dr = 0; dr < side; ++dr) {
    for (int dc = 0; dc < side; ++dc) {
      const std::size_t pixel = index(anchor.row + dr, anchor.col + dc);
      const std::size_t z = static_cast<std::size_t>(dr * side + dc);
      for (std::size_t k = 0; k < k_stride(); ++k) votes_[pixel * k_stride() + k] += patch_votes[z * k_stride() + k];
      ++coverage_[pixel];
    }
  }
}

std::vector<double> patch_votes(const ResidualMatrix& residuals, double vote_eps) {
  if (!(vote_eps > 0.0)) throw Error("vote epsilon must be positive");
  std::vector<double> votes;
  for (const auto& row : residuals) {
    for (const auto& r : row) votes.push_back(r ? 1.0 / std::max(*r, vote_eps) : 0.0);
  }
  return votes;
}

void accumulate(VoteField& field, PixelCoord anchor, int side, const std::vector<double>& patch_votes) {
  field.accumulate(anchor, side, patch_votes);
}

LabelMap finalize(const VoteField& field) {
  LabelMap map(field.height(), field.width());
  for (int r = 0; r < field.height(); ++r) {
    for (int c = 0; c < field.width(); ++c) {
      int best = 0;
      double best_vote = 0.0;
      for (int k = 1; k <= field.class_count(); ++k) {
        if (field.vote(r, c, k) > best_vote) {
          best_vote = field.vote(r, c, k);
          best = k;
        }
      }
      map.set(r, c, best);
    }
  }
  return map;
}

PatchClassifier::PatchClassifier(const TrainingSet& training, const ShapeletSet& shapelets,
                                 const ClassifyOptions& options)
    : training_(training),
      shapelets_(shapelets),
      options_(options),
      geometry_(shapelets.side()),
      standardized_(training.spectra()) {
  options.mrf.validate();
  if (options.sparsity < 1) throw Error("sparsity W must be >= 1");
  if (!(options.vote_eps > 0.0)) throw Error("vote epsilon must be positive");
}

PatchResult PatchClassifier::classify_patch(const HyperCube& cube, PixelCoord anchor) const {
  PatchResult out;
  const Eigen::VectorXd x = extract_patch(cube, anchor, geometry_);
  const Eigen::Map<const Eigen::MatrixXd> pixels(x.data(), cube.bands(), geometry_.pixel_count());
  const PatchEvidence evidence(pixel_correlations(pixels, standardized_), training_);
  out.dictionary = build_patch_dictionary(evidence, shapelets_, training_, options_.mrf);
  out.code = omp(out.dictionary.atoms, x, OmpOptions{options_.sparsity});
  out.residuals = classwise_pixel_residuals(out.dictionary, out.code, pixels, training_.class_count());
  out.votes = patch_votes(out.residuals, options_.vote_eps);
  return out;
}

VoteField classify_votes(const HyperCube& cube, const TrainingSet& training, const ShapeletSet& shapelets,
                         const ClassifyOptions& options) {
  if (cube.bands() != training.bands()) {
    throw Error("band count mismatch: cube has " + std::to_string(cube.bands()) + ", training spectra have " +
                std::to_string(training.bands()));
  }
  const PatchGeometry geometry(shapelets.side());
  const auto anchors = enumerate_patches(cube, geometry);
  const PatchClassifier classifier(training, shapelets, options);
  VoteField field(cube.height(), cube.width(), training.class_count());

  // Fixed-size batches bound the memory held for pending votes.
  constexpr std::size_t batch = 256;
  std::vector<std::vector<double>> pending(batch);
  for (std::size_t start = 0; start < anchors.size(); start += batch) {
    const std::size_t count = std::min(batch, anchors.size() - start);
    parallel_for(static_cast<int>(count), options.workers, [&](int i) {
      pending[static_cast<std::size_t>(i)] =
          classifier.classify_patch(cube, anchors[start + static_cast<std::size_t>(i)]).votes;
    });
    for (std::size_t i = 0; i < count; ++i) field.accumulate(anchors[start + i], geometry.side(), pending[i]);
  }
  return field;
}

LabelMap classify_image(const HyperCube& cube, const TrainingSet& training, const ShapeletSet& shapelets,
                        const ClassifyOptions& options) {
  return finalize(classify_votes(cube, training, shapelets, options));
}

}  // namespace shapedc
