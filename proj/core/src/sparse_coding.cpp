#include "shapedc/sparse_coding.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <string>

namespace shapedc {

SparseCode omp(const Eigen::MatrixXd& dictionary, const Eigen::VectorXd& target, const OmpOptions& options) {
  if (options.max_atoms < 1) throw Error("OMP needs a sparsity budget >= 1");
  if (dictionary.cols() < 1) throw Error("OMP needs at least one dictionary column");
  if (dictionary.rows() != target.size()) {
    throw Error("dictionary rows (" + std::to_string(dictionary.rows()) + ") do not match target length (" +
                std::to_string(target.size()) + ")");
  }
  const Eigen::VectorXd norms = dictionary.colwise().norm().transpose();
  if ((norms.array() == 0.0).all()) throw Error("degenerate dictionary: every column is zero");

  SparseCode code;
  Eigen::VectorXd residual = target;
  double residual_norm = residual.norm();
  code.residual_history.push_back(residual_norm);
  std::vector<bool> used(static_cast<std::size_t>(dictionary.cols()), false);

  const int budget = static_cast<int>(std::min<Eigen::Index>(options.max_atoms, dictionary.cols()));
  while (static_cast<int>(code.selected.size()) < budget && residual_norm >= options.residual_tol) {
    Eigen::Index best = -1;
    double best_corr = 0.0;
    for (Eigen::Index c = 0; c < dictionary.cols(); ++c) {
      if (used[static_cast<std::size_t>(c)] || norms(c) == 0.0) continue;
      const double corr = std::abs(dictionary.col(c).dot(residual)) / norms(c);
      if (corr > best_corr) {
        best_corr = corr;
        best = c;
      }
    }
    // Nothing left that correlates with the residual beyond rounding noise.
    if (best < 0 || best_corr <= 1e-14 * residual_norm) break;

    std::vector<int> support = code.selected;
    support.push_back(static_cast<int>(best));
    const auto s = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd sub(dictionary.rows(), s);
    for (Eigen::Index i = 0; i < s; ++i) sub.col(i) = dictionary.col(support[static_cast<std::size_t>(i)]);
    Eigen::MatrixXd gram = sub.transpose() * sub;
    gram.diagonal().array() += options.ridge;
    const Eigen::VectorXd coeffs = gram.ldlt().solve(sub.transpose() * target);
    Eigen::VectorXd next_residual = target - sub * coeffs;
    const double next_norm = next_residual.norm();
    if (!(next_norm <= residual_norm)) break;

    used[static_cast<std::size_t>(best)] = true;
    code.selected = std::move(support);
    code.coefficients.assign(coeffs.data(), coeffs.data() + coeffs.size());
    residual = std::move(next_residual);
    residual_norm = next_norm;
    code.residual_history.push_back(residual_norm);
  }
  code.residual_norm = residual_norm;
  return code;
}

ResidualMatrix classwise_pixel_residuals(const PatchDictionary& dictionary, const SparseCode& code,
                                         const Eigen::MatrixXd& patch_pixels, int class_count) {
  const auto m = patch_pixels.rows();
  const auto z_count = patch_pixels.cols();
  if (dictionary.atoms.rows() != m * z_count) throw Error("dictionary does not match patch dimensions");
  if (code.selected.size() != code.coefficients.size()) throw Error("sparse code is inconsistent");

  ResidualMatrix residuals(static_cast<std::size_t>(z_count),
                           std::vector<std::optional<double>>(static_cast<std::size_t>(class_count)));
  Eigen::VectorXd recon(m);
  for (Eigen::Index z = 0; z < z_count; ++z) {
    for (int k = 1; k <= class_count; ++k) {
      bool present = false;
      recon.setZero();
      for (std::size_t i = 0; i < code.selected.size(); ++i) {
        const int c = code.selected[i];
        if (dictionary.pixel_labels[static_cast<std::size_t>(c)][static_cast<std::size_t>(z)] != k) continue;
        present = true;
        recon += code.coefficients[i] * dictionary.atoms.col(c).segment(z * m, m);
      }
      if (present) {
        residuals[static_cast<std::size_t>(z)][static_cast<std::size_t>(k - 1)] = (patch_pixels.col(z) - recon).norm();
      }
    }
  }
  return residuals;
}

}  // namespace shapedc
