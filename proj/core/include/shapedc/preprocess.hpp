#pragma once

#include "shapedc/types.hpp"

#include <vector>

namespace shapedc {

/// Per-band standardization with the population (1/N) standard deviation.
/// Bands whose standard deviation is below 1e-12 become all zeros.
HyperCube z_normalize(const HyperCube& cube);

/// Top-left anchors of every fully interior side x side window, row-major,
/// stride 1. Throws if the cube is smaller than the patch.
std::vector<PixelCoord> enumerate_patches(const HyperCube& cube, const PatchGeometry& geometry);
std::vector<PixelCoord> enumerate_patches(int height, int width, const PatchGeometry& geometry);

/// Vectorized window: pixel z (row-major in the patch) occupies rows
/// [z*M, (z+1)*M).
Eigen::VectorXd extract_patch(const HyperCube& cube, PixelCoord anchor,
                              const PatchGeometry& geometry);

/// Per-pixel spectra of the window as an M x Z matrix (column z = pixel z).
Eigen::MatrixXd extract_patch_pixels(const HyperCube& cube, PixelCoord anchor,
                                     const PatchGeometry& geometry);

/// Inverse of extract_patch: a side x side x M cube.
HyperCube unvectorize_patch(const Eigen::VectorXd& patch, const PatchGeometry& geometry, int bands);

}  // namespace shapedc
