#pragma once

#include "shapedc/types.hpp"

#include <optional>
#include <vector>

namespace shapedc {

struct OmpOptions {
  int max_atoms = 3;            // sparsity budget W
  double residual_tol = 1e-9;   // stop once the residual norm drops below this
  double ridge = 1e-12;         // added to the Gram diagonal in the refit
};

/// Orthogonal matching pursuit. Atoms are selected by the largest
/// |<d/|d|, residual>| among unused nonzero columns; after each selection the
/// coefficients of all selected (original, unnormalized) columns are refit by
/// least squares. Stops after max_atoms selections, once the residual norm is
/// below residual_tol, when no column correlates with the residual, or when a
/// refit would not reduce the residual. Throws if every column is zero.
SparseCode omp(const Eigen::MatrixXd& dictionary, const Eigen::VectorXd& target, const OmpOptions& options);

/// Z x K matrix of per-pixel, per-class reconstruction errors; nullopt marks
/// classes with no selected column labeled that class at that pixel.
using ResidualMatrix = std::vector<std::vector<std::optional<double>>>;

/// For pixel z and class k, reconstructs x_z from the pixel-z row block of
/// the selected columns whose label at z is k, with their coded coefficients,
/// and returns the l2 error. `patch_pixels` is M x Z.
ResidualMatrix classwise_pixel_residuals(const PatchDictionary& dictionary, const SparseCode& code,
                                         const Eigen::MatrixXd& patch_pixels, int class_count);

}  // namespace shapedc
