#include "shapedc/superpixel.hpp"

#include "shapedc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace shapedc {
namespace {

double gradient(const HyperCube& cube, int r, int c) {
  double g = 0.0;
  const auto here = cube.pixel(r, c);
  if (c + 1 < cube.width()) {
    const auto right = cube.pixel(r, c + 1);
    for (int b = 0; b < cube.bands(); ++b) g += (right[b] - here[b]) * (right[b] - here[b]);
  }
  if (r + 1 < cube.height()) {
    const auto down = cube.pixel(r + 1, c);
    for (int b = 0; b < cube.bands(); ++b) g += (down[b] - here[b]) * (down[b] - here[b]);
  }
  return g;
}

// 4-connected components; returns component id per pixel and the component count.
int label_components(const std::vector<int>& labels, int height, int width, std::vector<int>& comp) {
  comp.assign(labels.size(), -1);
  int count = 0;
  std::vector<int> stack;
  for (int start = 0; start < static_cast<int>(labels.size()); ++start) {
    if (comp[static_cast<std::size_t>(start)] >= 0) continue;
    const int label = labels[static_cast<std::size_t>(start)];
    comp[static_cast<std::size_t>(start)] = count;
    stack.push_back(start);
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      const int r = p / width, c = p % width;
      const int nbrs[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
      for (const auto& n : nbrs) {
        if (n[0] < 0 || n[0] >= height || n[1] < 0 || n[1] >= width) continue;
        const int q = n[0] * width + n[1];
        if (comp[static_cast<std::size_t>(q)] < 0 && labels[static_cast<std::size_t>(q)] == label) {
          comp[static_cast<std::size_t>(q)] = count;
          stack.push_back(q);
        }
      }
    }
    ++count;
  }
  return count;
}

}  // namespace

SlicSolver::SlicSolver(const HyperCube& cube, const SlicOptions& options)
    : cube_(cube), options_(options) {
  const int s = options.target_size;
  if (s < 2) throw Error("SLIC target size must be >= 2");
  if (s > std::max(cube.height(), cube.width())) {
    throw Error("SLIC target size " + std::to_string(s) + " is larger than the image");
  }
  if (!(options.compactness >= 0.0)) throw Error("SLIC compactness must be nonnegative");
  if (options.iterations < 0) throw Error("SLIC iteration count must be nonnegative");
  spatial_weight2_ = (options.compactness / s) * (options.compactness / s);

  const int h = cube.height(), w = cube.width();
  const int ny = std::max(1, (h + s - 1) / s);
  const int nx = std::max(1, (w + s - 1) / s);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const int r0 = static_cast<int>((iy + 0.5) * h / ny);
      const int c0 = static_cast<int>((ix + 0.5) * w / nx);
      int best_r = r0, best_c = c0;
      double best_g = gradient(cube, r0, c0);
      for (int r = std::max(0, r0 - 1); r <= std::min(h - 1, r0 + 1); ++r) {
        for (int c = std::max(0, c0 - 1); c <= std::min(w - 1, c0 + 1); ++c) {
          const double g = gradient(cube, r, c);
          if (g < best_g) {
            best_g = g;
            best_r = r;
            best_c = c;
          }
        }
      }
      const auto px = cube.pixel(best_r, best_c);
      centers_.push_back({{px.begin(), px.end()}, static_cast<double>(best_r), static_cast<double>(best_c)});
    }
  }
  assignment_.assign(cube.pixel_count(), -1);
}

double SlicSolver::distance2(int pixel, const Center& center) const {
  const int r = pixel / cube_.width(), c = pixel % cube_.width();
  const auto px = cube_.pixel(r, c);
  double spectral = 0.0;
  for (std::size_t b = 0; b < px.size(); ++b) {
    const double d = px[b] - center.spectrum[b];
    spectral += d * d;
  }
  const double dr = r - center.row, dc = c - center.col;
  return spectral + spatial_weight2_ * (dr * dr + dc * dc);
}

void SlicSolver::assign() {
  const int w = cube_.width();
  const double s = options_.target_size;
  const int n_centers = static_cast<int>(centers_.size());
  // One task per image row; each writes only its own row of the assignment.
  parallel_for(cube_.height(), options_.workers, [&](int r) {
    for (int c = 0; c < w; ++c) {
      const int p = r * w + c;
      int best = assignment_[static_cast<std::size_t>(p)];
      double best_d = best >= 0 ? distance2(p, centers_[static_cast<std::size_t>(best)])
                                : std::numeric_limits<double>::infinity();
      for (int k = 0; k < n_centers; ++k) {
        const auto& ctr = centers_[static_cast<std::size_t>(k)];
        if (std::abs(ctr.row - r) > s || std::abs(ctr.col - c) > s) continue;
        const double d = distance2(p, ctr);
        if (d < best_d || (d == best_d && k < best)) {
          best_d = d;
          best = k;
        }
      }
      if (best < 0) {
        for (int k = 0; k < n_centers; ++k) {
          const double d = distance2(p, centers_[static_cast<std::size_t>(k)]);
          if (d < best_d) {
            best_d = d;
            best = k;
          }
        }
      }
      assignment_[static_cast<std::size_t>(p)] = best;
    }
  });
}

void SlicSolver::update() {
  const auto bands = static_cast<std::size_t>(cube_.bands());
  const int w = cube_.width();
  std::vector<Center> sums(centers_.size(), Center{std::vector<double>(bands, 0.0), 0.0, 0.0});
  std::vector<std::size_t> counts(centers_.size(), 0);
  for (std::size_t p = 0; p < assignment_.size(); ++p) {
    const int k = assignment_[p];
    if (k < 0) continue;
    auto& acc = sums[static_cast<std::size_t>(k)];
    const int r = static_cast<int>(p) / w, c = static_cast<int>(p) % w;
    const auto px = cube_.pixel(r, c);
    for (std::size_t b = 0; b < bands; ++b) acc.spectrum[b] += px[b];
    acc.row += r;
    acc.col += c;
    ++counts[static_cast<std::size_t>(k)];
  }
  for (std::size_t k = 0; k < centers_.size(); ++k) {
    if (counts[k] == 0) continue;
    const double n = static_cast<double>(counts[k]);
    for (std::size_t b = 0; b < bands; ++b) centers_[k].spectrum[b] = sums[k].spectrum[b] / n;
    centers_[k].row = sums[k].row / n;
    centers_[k].col = sums[k].col / n;
  }
}

double SlicSolver::objective() const {
  double total = 0.0;
  for (std::size_t p = 0; p < assignment_.size(); ++p) {
    const int k = assignment_[p];
    if (k >= 0) total += distance2(static_cast<int>(p), centers_[static_cast<std::size_t>(k)]);
  }
  return total;
}

Segmentation enforce_connectivity(const std::vector<int>& labels, int height, int width, int min_size) {
  if (labels.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
    throw Error("label vector does not match image dimensions");
  }
  std::vector<int> comp;
  const int n_comp = label_components(labels, height, width, comp);

  std::vector<int> parent(static_cast<std::size_t>(n_comp));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  std::vector<int> size(static_cast<std::size_t>(n_comp), 0);
  std::vector<std::vector<int>> pixels_of(static_cast<std::size_t>(n_comp));
  for (std::size_t p = 0; p < comp.size(); ++p) {
    ++size[static_cast<std::size_t>(comp[p])];
    pixels_of[static_cast<std::size_t>(comp[p])].push_back(static_cast<int>(p));
  }

  // Component ids follow row-major first-pixel order, so orphans are merged
  // in a fixed order.
  for (int k = 0; k < n_comp; ++k) {
    const int self = find(k);
    if (size[static_cast<std::size_t>(self)] >= min_size) continue;
    int target = -1;
    for (const int p : pixels_of[static_cast<std::size_t>(k)]) {
      const int r = p / width, c = p % width;
      const int nbrs[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
      for (const auto& n : nbrs) {
        if (n[0] < 0 || n[0] >= height || n[1] < 0 || n[1] >= width) continue;
        const int other = find(comp[static_cast<std::size_t>(n[0] * width + n[1])]);
        if (other == self) continue;
        const int so = size[static_cast<std::size_t>(other)];
        if (target < 0 || so > size[static_cast<std::size_t>(target)] ||
            (so == size[static_cast<std::size_t>(target)] && other < target)) {
          target = other;
        }
      }
    }
    if (target < 0) continue;  // this component is the whole image
    parent[static_cast<std::size_t>(self)] = target;
    size[static_cast<std::size_t>(target)] += size[static_cast<std::size_t>(self)];
  }

  std::vector<int> new_id(static_cast<std::size_t>(n_comp), 0);
  std::vector<int> out(labels.size());
  int next = 0;
  for (std::size_t p = 0; p < comp.size(); ++p) {
    auto& id = new_id[static_cast<std::size_t>(find(comp[p]))];
    if (id == 0) id = ++next;
    out[p] = id;
  }
  return {LabelMap::from_values(height, width, std::move(out)), next};
}

Segmentation slic_segment(const HyperCube& cube, const SlicOptions& options) {
  SlicSolver solver(cube, options);
  solver.assign();
  for (int it = 0; it < options.iterations; ++it) {
    solver.update();
    solver.assign();
  }
  const int min_size = std::max(1, options.target_size * options.target_size / 4);
  return enforce_connectivity(solver.assignment(), cube.height(), cube.width(), min_size);
}

bool segments_are_connected(const LabelMap& labels) {
  const std::vector<int> values(labels.values().begin(), labels.values().end());
  std::vector<int> comp;
  const int n_comp = label_components(values, labels.height(), labels.width(), comp);
  std::map<int, int> seen;
  for (std::size_t p = 0; p < values.size(); ++p) {
    auto [it, inserted] = seen.emplace(values[p], comp[p]);
    if (!inserted && it->second != comp[p]) return false;
  }
  return static_cast<int>(seen.size()) == n_comp;
}

}  // namespace shapedc
