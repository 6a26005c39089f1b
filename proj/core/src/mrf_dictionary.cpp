#include "shapedc/mrf_dictionary.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace shapedc {
namespace {

// Centers each column and scales it to unit norm; near-constant columns
// (centered norm negligible against the raw norm) become zero.
Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const Eigen::VectorXd centered = m.col(j).array() - m.col(j).mean();
    const double norm = centered.norm();
    const double scale = m.col(j).norm();
    if (norm == 0.0 || norm <= 1e-12 * scale) {
      out.col(j).setZero();
    } else {
      out.col(j) = centered / norm;
    }
  }
  return out;
}

void require_bands(Eigen::Index bands) {
  if (bands < 2) throw Error("correlation undefined over fewer than 2 bands");
}

}  // namespace

StandardizedSpectra::StandardizedSpectra(const Eigen::MatrixXd& spectra) {
  require_bands(spectra.rows());
  standardized_ = standardize_columns(spectra);
}

Eigen::MatrixXd pixel_correlations(const Eigen::MatrixXd& patch_pixels,
                                   const StandardizedSpectra& training_spectra) {
  require_bands(patch_pixels.rows());
  if (patch_pixels.rows() != training_spectra.matrix().rows()) {
    throw Error("band count mismatch between patch and training spectra");
  }
  Eigen::MatrixXd corr = standardize_columns(patch_pixels).transpose() * training_spectra.matrix();
  return corr.cwiseMax(-1.0).cwiseMin(1.0);
}

Eigen::MatrixXd pixel_correlations(const Eigen::MatrixXd& patch_pixels, const TrainingSet& training) {
  return pixel_correlations(patch_pixels, StandardizedSpectra(training.spectra()));
}

std::vector<int> nn_label_estimate(const Eigen::MatrixXd& correlations, const TrainingSet& training) {
  if (correlations.cols() != training.size()) throw Error("correlation matrix does not match training set");
  std::vector<int> labels(static_cast<std::size_t>(correlations.rows()));
  for (Eigen::Index z = 0; z < correlations.rows(); ++z) {
    Eigen::Index best = 0;
    for (Eigen::Index l = 1; l < correlations.cols(); ++l) {
      if (correlations(z, l) > correlations(z, best)) best = l;
    }
    labels[static_cast<std::size_t>(z)] = training.label(static_cast<int>(best));
  }
  return labels;
}

std::vector<double> region_histogram(const std::vector<int>& estimated_labels,
                                     const std::vector<int>& region_pixels, int class_count) {
  if (region_pixels.empty()) throw Error("empty region");
  std::vector<double> h(static_cast<std::size_t>(class_count), 0.0);
  for (const int z : region_pixels) {
    const int y = estimated_labels[static_cast<std::size_t>(z)];
    if (y < 1 || y > class_count) throw Error("estimated label out of range");
    h[static_cast<std::size_t>(y - 1)] += 1.0;
  }
  for (auto& v : h) v /= static_cast<double>(region_pixels.size());
  return h;
}

std::vector<std::vector<double>> region_histograms(const std::vector<int>& estimated_labels,
                                                   const Shapelet& shapelet, int class_count) {
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(shapelet.region_count()));
  for (int r = 0; r < shapelet.region_count(); ++r) {
    out.push_back(region_histogram(estimated_labels, shapelet.region_pixels(r), class_count));
  }
  return out;
}

double energy(const std::vector<int>& pixel_choice, const std::vector<int>& region_choice,
              const Eigen::MatrixXd& correlations, const std::vector<std::vector<double>>& histograms,
              const Shapelet& shapelet, const std::vector<int>& training_labels, const MrfConfig& config) {
  const auto z_count = static_cast<std::size_t>(shapelet.side()) * static_cast<std::size_t>(shapelet.side());
  if (pixel_choice.size() != z_count || region_choice.size() != static_cast<std::size_t>(shapelet.region_count())) {
    throw Error("assignment size does not match shapelet");
  }
  double e = 0.0;
  for (std::size_t z = 0; z < z_count; ++z) {
    e -= correlations(static_cast<Eigen::Index>(z), pixel_choice[z]);
  }
  for (int r = 0; r < shapelet.region_count(); ++r) {
    const int region_class = training_labels[static_cast<std::size_t>(region_choice[static_cast<std::size_t>(r)])];
    e -= config.gamma * histograms[static_cast<std::size_t>(r)][static_cast<std::size_t>(region_class - 1)];
    int disagreements = 0;
    for (const int z : shapelet.region_pixels(r)) {
      if (training_labels[static_cast<std::size_t>(pixel_choice[static_cast<std::size_t>(z)])] != region_class) {
        ++disagreements;
      }
    }
    e += config.omega * disagreements;
  }
  return e;
}

PatchEvidence::PatchEvidence(Eigen::MatrixXd correlations, const TrainingSet& training)
    : correlations_(std::move(correlations)), class_count_(training.class_count()) {
  if (correlations_.cols() != training.size()) throw Error("correlation matrix does not match training set");
  const auto z_count = static_cast<std::size_t>(correlations_.rows());
  const auto k_count = static_cast<std::size_t>(class_count_);
  best_corr_.assign(z_count * k_count, -std::numeric_limits<double>::infinity());
  best_sample_.assign(z_count * k_count, -1);
  ranked_.assign(z_count * 2, 0);
  estimated_.assign(z_count, 0);

  for (Eigen::Index z = 0; z < correlations_.rows(); ++z) {
    for (Eigen::Index l = 0; l < correlations_.cols(); ++l) {
      const auto idx = flat(static_cast<int>(z), training.label(static_cast<int>(l)));
      if (correlations_(z, l) > best_corr_[idx]) {
        best_corr_[idx] = correlations_(z, l);
        best_sample_[idx] = static_cast<int>(l);
      }
    }
    // Rank classes by (-corr, sample index); the first one is also the
    // nearest-neighbour estimate.
    auto better = [&](int a, int b) {
      const double ca = best_corr(static_cast<int>(z), a), cb = best_corr(static_cast<int>(z), b);
      if (ca != cb) return ca > cb;
      return best_sample(static_cast<int>(z), a) < best_sample(static_cast<int>(z), b);
    };
    int first = 1, second = 0;
    for (int k = 2; k <= class_count_; ++k) {
      if (better(k, first)) {
        second = first;
        first = k;
      } else if (second == 0 || better(k, second)) {
        second = k;
      }
    }
    ranked_[static_cast<std::size_t>(z) * 2] = first;
    ranked_[static_cast<std::size_t>(z) * 2 + 1] = second;
    estimated_[static_cast<std::size_t>(z)] = first;
  }
}

Assignment infer_assignment(const PatchEvidence& evidence, const Shapelet& shapelet,
                            const TrainingSet& training, const MrfConfig& config) {
  config.validate();
  if (evidence.pixel_count() != shapelet.side() * shapelet.side()) {
    throw Error("shapelet size does not match patch");
  }
  const int k_count = evidence.class_count();
  const auto histograms = region_histograms(evidence.estimated_labels(), shapelet, k_count);

  Assignment result;
  result.pixel_choice.assign(static_cast<std::size_t>(evidence.pixel_count()), 0);
  result.region_choice.assign(static_cast<std::size_t>(shapelet.region_count()), 0);

  // Cheapest sample for pixel z given region class k; lexicographic on
  // (cost, sample index).
  auto pixel_best = [&](int z, int k, double& cost) {
    double best = -evidence.best_corr(z, k);
    int sample = evidence.best_sample(z, k);
    const int other = evidence.first_class(z) != k ? evidence.first_class(z) : evidence.second_class(z);
    if (other != 0) {
      const double c = -evidence.best_corr(z, other) + config.omega;
      const int s = evidence.best_sample(z, other);
      if (c < best || (c == best && s < sample)) {
        best = c;
        sample = s;
      }
    }
    cost = best;
    return sample;
  };

  std::vector<int> choice;
  for (int r = 0; r < shapelet.region_count(); ++r) {
    const auto& pixels = shapelet.region_pixels(r);
    double best_cost = std::numeric_limits<double>::infinity();
    int best_class = 0;
    std::vector<int> best_choice;
    for (int k = 1; k <= k_count; ++k) {
      double cost = -config.gamma * histograms[static_cast<std::size_t>(r)][static_cast<std::size_t>(k - 1)];
      choice.clear();
      for (const int z : pixels) {
        double c = 0.0;
        choice.push_back(pixel_best(z, k, c));
        cost += c;
      }
      if (cost < best_cost) {
        best_cost = cost;
        best_class = k;
        best_choice = choice;
      }
    }
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      result.pixel_choice[static_cast<std::size_t>(pixels[i])] = best_choice[i];
    }
    result.region_choice[static_cast<std::size_t>(r)] = training.first_sample_of(best_class);
  }
  result.energy = energy(result.pixel_choice, result.region_choice, evidence.correlations(), histograms,
                         shapelet, training.labels(), config);
  return result;
}

Assignment infer_assignment(const Eigen::MatrixXd& correlations, const Shapelet& shapelet,
                            const TrainingSet& training, const MrfConfig& config) {
  return infer_assignment(PatchEvidence(correlations, training), shapelet, training, config);
}

PatchDictionary build_patch_dictionary(const PatchEvidence& evidence, const ShapeletSet& shapelets,
                                       const TrainingSet& training, const MrfConfig& config) {
  const int z_count = evidence.pixel_count();
  const int m = training.bands();
  PatchDictionary dict;
  for (const auto& shapelet : shapelets.shapelets()) {
    auto assignment = infer_assignment(evidence, shapelet, training, config);
    const bool duplicate = std::find(dict.source_indices.begin(), dict.source_indices.end(),
                                     assignment.pixel_choice) != dict.source_indices.end();
    if (!duplicate) dict.source_indices.push_back(std::move(assignment.pixel_choice));
  }
  const auto n = static_cast<Eigen::Index>(dict.source_indices.size());
  dict.atoms.resize(static_cast<Eigen::Index>(z_count) * m, n);
  dict.pixel_labels.resize(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto& sources = dict.source_indices[static_cast<std::size_t>(c)];
    auto& labels = dict.pixel_labels[static_cast<std::size_t>(c)];
    labels.resize(sources.size());
    for (int z = 0; z < z_count; ++z) {
      const int l = sources[static_cast<std::size_t>(z)];
      dict.atoms.col(c).segment(static_cast<Eigen::Index>(z) * m, m) = training.spectra().col(l);
      labels[static_cast<std::size_t>(z)] = training.label(l);
    }
  }
  return dict;
}

PatchDictionary build_patch_dictionary(const Eigen::MatrixXd& patch_pixels, const ShapeletSet& shapelets,
                                       const TrainingSet& training, const MrfConfig& config) {
  return build_patch_dictionary(PatchEvidence(pixel_correlations(patch_pixels, training), training),
                                shapelets, training, config);
}

}  // namespace shapedc
