#include "shapedc/preprocess.hpp"

#include <cmath>
#include <string>

namespace shapedc {

HyperCube z_normalize(const HyperCube& cube) {
  const auto bands = static_cast<std::size_t>(cube.bands());
  const std::size_t n = cube.pixel_count();
  const auto in = cube.values();
  std::vector<double> mean(bands, 0.0), stddev(bands, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t b = 0; b < bands; ++b) mean[b] += in[p * bands + b];
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t b = 0; b < bands; ++b) {
      const double d = in[p * bands + b] - mean[b];
      stddev[b] += d * d;
    }
  }
  for (auto& s : stddev) s = std::sqrt(s / static_cast<double>(n));

  std::vector<double> out(in.size());
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t b = 0; b < bands; ++b) {
      out[p * bands + b] = stddev[b] < 1e-12 ? 0.0 : (in[p * bands + b] - mean[b]) / stddev[b];
    }
  }
  return HyperCube::from_pixel_interleaved(cube.height(), cube.width(), cube.bands(), std::move(out));
}

std::vector<PixelCoord> enumerate_patches(int height, int width, const PatchGeometry& geometry) {
  const int side = geometry.side();
  if (height < side || width < side) {
    throw Error("cube smaller than patch: " + std::to_string(height) + "x" + std::to_string(width) +
                " image, patch side " + std::to_string(side));
  }
  std::vector<PixelCoord> anchors;
  anchors.reserve(static_cast<std::size_t>(height - side + 1) * static_cast<std::size_t>(width - side + 1));
  for (int r = 0; r + side <= height; ++r) {
    for (int c = 0; c + side <= width; ++c) anchors.push_back({r, c});
  }
  return anchors;
}

std::vector<PixelCoord> enumerate_patches(const HyperCube& cube, const PatchGeometry& geometry) {
  return enumerate_patches(cube.height(), cube.width(), geometry);
}

namespace {
void check_anchor(const HyperCube& cube, PixelCoord anchor, const PatchGeometry& geometry) {
  if (anchor.row < 0 || anchor.col < 0 || anchor.row + geometry.side() > cube.height() ||
      anchor.col + geometry.side() > cube.width()) {
    throw Error("out-of-bounds anchor (" + std::to_string(anchor.row) + ", " +
                std::to_string(anchor.col) + ") for patch side " + std::to_string(geometry.side()));
  }
}
}  // namespace

Eigen::VectorXd extract_patch(const HyperCube& cube, PixelCoord anchor, const PatchGeometry& geometry) {
  check_anchor(cube, anchor, geometry);
  const int side = geometry.side();
  const int m = cube.bands();
  Eigen::VectorXd x(static_cast<Eigen::Index>(geometry.pixel_count()) * m);
  for (int dr = 0; dr < side; ++dr) {
    for (int dc = 0; dc < side; ++dc) {
      const auto px = cube.pixel(anchor.row + dr, anchor.col + dc);
      x.segment(static_cast<Eigen::Index>(dr * side + dc) * m, m) =
          Eigen::Map<const Eigen::VectorXd>(px.data(), m);
    }
  }
  return x;
}

Eigen::MatrixXd extract_patch_pixels(const HyperCube& cube, PixelCoord anchor,
                                     const PatchGeometry& geometry) {
  const Eigen::VectorXd x = extract_patch(cube, anchor, geometry);
  return Eigen::Map<const Eigen::MatrixXd>(x.data(), cube.bands(), geometry.pixel_count());
}

HyperCube unvectorize_patch(const Eigen::VectorXd& patch, const PatchGeometry& geometry, int bands) {
  if (bands < 1 || patch.size() != static_cast<Eigen::Index>(geometry.pixel_count()) * bands) {
    throw Error("vectorized patch length does not match geometry and band count");
  }
  // The vectorized layout is already pixel-interleaved row-major.
  return HyperCube::from_pixel_interleaved(geometry.side(), geometry.side(), bands,
                                           std::vector<double>(patch.data(), patch.data() + patch.size()));
}

}  // namespace shapedc
