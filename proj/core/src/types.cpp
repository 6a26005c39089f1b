#include "shapedc/types.hpp"

#include <algorithm>
#include <string>

namespace shapedc {

HyperCube HyperCube::from_pixel_interleaved(int height, int width, int bands,
                                            std::vector<double> values) {
  if (height < 1 || width < 1 || bands < 1) {
    throw Error("cube dimensions must be >= 1 (got " + std::to_string(height) + "x" +
                std::to_string(width) + "x" + std::to_string(bands) + ")");
  }
  const std::size_t expected = static_cast<std::size_t>(height) *
                               static_cast<std::size_t>(width) *
                               static_cast<std::size_t>(bands);
  if (values.size() != expected) {
    throw Error("cube value count " + std::to_string(values.size()) +
                " does not match height*width*bands = " + std::to_string(expected));
  }
  HyperCube cube;
  cube.height_ = height;
  cube.width_ = width;
  cube.bands_ = bands;
  cube.values_ = std::move(values);
  return cube;
}

LabelMap::LabelMap(int height, int width, int fill)
    : height_(height), width_(width) {
  if (height < 1 || width < 1) throw Error("label map dimensions must be >= 1");
  if (fill < 0) throw Error("negative label");
  values_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

LabelMap LabelMap::from_values(int height, int width, std::vector<int> values) {
  LabelMap map(height, width);
  if (values.size() != map.values_.size()) throw Error("label map size mismatch");
  if (std::any_of(values.begin(), values.end(), [](int v) { return v < 0; })) {
    throw Error("negative label");
  }
  map.values_ = std::move(values);
  return map;
}

int LabelMap::max_label() const {
  return values_.empty() ? 0 : *std::max_element(values_.begin(), values_.end());
}

TrainingSet TrainingSet::create(Eigen::MatrixXd spectra, std::vector<int> labels) {
  if (labels.empty()) throw Error("training set must contain at least one sample");
  if (spectra.cols() != static_cast<Eigen::Index>(labels.size())) {
    throw Error("length mismatch: " + std::to_string(spectra.cols()) + " spectra but " +
                std::to_string(labels.size()) + " labels");
  }
  if (spectra.rows() < 1) throw Error("length mismatch: spectra have no bands");
  const int k = *std::max_element(labels.begin(), labels.end());
  std::vector<int> first(static_cast<std::size_t>(std::max(k, 0)), -1);
  for (std::size_t l = 0; l < labels.size(); ++l) {
    const int y = labels[l];
    if (y < 1) {
      throw Error("label out of range: sample " + std::to_string(l) + " has label " +
                  std::to_string(y));
    }
    auto& slot = first[static_cast<std::size_t>(y - 1)];
    if (slot < 0) slot = static_cast<int>(l);
  }
  for (int c = 0; c < k; ++c) {
    if (first[static_cast<std::size_t>(c)] < 0) {
      throw Error("empty class: class " + std::to_string(c + 1) + " has no training sample");
    }
  }
  TrainingSet set;
  set.spectra_ = std::move(spectra);
  set.labels_ = std::move(labels);
  set.first_of_class_ = std::move(first);
  set.class_count_ = k;
  return set;
}

TrainingSet TrainingSet::create(const std::vector<std::vector<double>>& spectra,
                                const std::vector<int>& labels, int bands) {
  if (bands < 1) throw Error("band count must be >= 1");
  if (spectra.size() != labels.size()) {
    throw Error("length mismatch: " + std::to_string(spectra.size()) + " spectra but " +
                std::to_string(labels.size()) + " labels");
  }
  Eigen::MatrixXd matrix(bands, static_cast<Eigen::Index>(spectra.size()));
  for (std::size_t l = 0; l < spectra.size(); ++l) {
    if (spectra[l].size() != static_cast<std::size_t>(bands)) {
      throw Error("length mismatch: spectrum " + std::to_string(l) + " has " +
                  std::to_string(spectra[l].size()) + " values, expected " +
                  std::to_string(bands));
    }
    matrix.col(static_cast<Eigen::Index>(l)) =
        Eigen::Map<const Eigen::VectorXd>(spectra[l].data(), bands);
  }
  return create(std::move(matrix), labels);
}

TrainingSet TrainingSet::from_mask(const HyperCube& cube, const LabelMap& mask) {
  if (mask.height() != cube.height() || mask.width() != cube.width()) {
    throw Error("training mask dimensions do not match the cube");
  }
  std::vector<int> labels;
  std::vector<PixelCoord> where;
  for (int r = 0; r < cube.height(); ++r) {
    for (int c = 0; c < cube.width(); ++c) {
      if (mask.at(r, c) > 0) {
        labels.push_back(mask.at(r, c));
        where.push_back({r, c});
      }
    }
  }
  Eigen::MatrixXd spectra(cube.bands(), static_cast<Eigen::Index>(labels.size()));
  for (std::size_t l = 0; l < where.size(); ++l) {
    const auto px = cube.pixel(where[l].row, where[l].col);
    spectra.col(static_cast<Eigen::Index>(l)) =
        Eigen::Map<const Eigen::VectorXd>(px.data(), cube.bands());
  }
  return create(std::move(spectra), std::move(labels));
}

TrainingSet validate_training_set(const std::vector<std::vector<double>>& spectra,
                                  const std::vector<int>& labels, int bands) {
  return TrainingSet::create(spectra, labels, bands);
}

PatchGeometry::PatchGeometry(int side) : side_(side) {
  if (side < 2) throw Error("patch side must be >= 2 (got " + std::to_string(side) + ")");
}

Shapelet Shapelet::from_region_map(int side, std::vector<int> region_map) {
  if (side < 1) throw Error("shapelet side must be >= 1");
  const std::size_t z = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
  if (region_map.size() != z) throw Error("shapelet region map must have side*side entries");
  const int r_count = *std::max_element(region_map.begin(), region_map.end());
  if (*std::min_element(region_map.begin(), region_map.end()) < 1) {
    throw Error("shapelet region ids must be >= 1");
  }
  Shapelet s;
  s.side_ = side;
  s.region_count_ = r_count;
  s.regions_.resize(static_cast<std::size_t>(r_count));
  for (std::size_t p = 0; p < z; ++p) {
    s.regions_[static_cast<std::size_t>(region_map[p] - 1)].push_back(static_cast<int>(p));
  }
  for (int r = 0; r < r_count; ++r) {
    if (s.regions_[static_cast<std::size_t>(r)].empty()) {
      throw Error("shapelet region id " + std::to_string(r + 1) + " does not occur");
    }
  }
  s.region_map_ = std::move(region_map);
  return s;
}

ShapeletSet::ShapeletSet(std::vector<Shapelet> shapelets) : shapelets_(std::move(shapelets)) {
  if (shapelets_.empty()) throw Error("shapelet set must contain at least one shapelet");
  const int side = shapelets_.front().side();
  for (const auto& s : shapelets_) {
    if (s.side() != side) throw Error("all shapelets in a set must share one side length");
  }
}

void MrfConfig::validate() const {
  if (!(gamma >= 0.0)) throw Error("gamma must be nonnegative");
  if (!(omega >= 0.0)) throw Error("omega must be nonnegative");
}

}  // namespace shapedc
