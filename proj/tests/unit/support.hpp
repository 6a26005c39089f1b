#pragma once

#include "shapedc/shapedc.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace shapedc::testing {

inline HyperCube cube_from_bands(int height, int width, const std::vector<std::vector<double>>& bands) {
  std::vector<double> v;
  for (int p = 0; p < height * width; ++p) {
    for (const auto& band : bands) v.push_back(band[static_cast<std::size_t>(p)]);
  }
  return HyperCube::from_pixel_interleaved(height, width, static_cast<int>(bands.size()), std::move(v));
}

inline HyperCube random_cube(int height, int width, int bands, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(height * width * bands));
  for (auto& x : v) x = g(rng);
  return HyperCube::from_pixel_interleaved(height, width, bands, std::move(v));
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("shapedc_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace shapedc::testing
