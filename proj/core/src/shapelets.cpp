#include "shapedc/shapelets.hpp"

#include "shapedc/parallel.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <random>
#include <string>
#include <unordered_set>

namespace shapedc {

BinaryPatch::BinaryPatch(int side) : side_(side) {
  if (side < 1) throw Error("binary patch side must be >= 1");
  words_.assign((static_cast<std::size_t>(side) * static_cast<std::size_t>(side) + 63) / 64, 0);
}

BinaryPatch BinaryPatch::from_values(int side, const std::vector<int>& bits) {
  BinaryPatch p(side);
  if (bits.size() != static_cast<std::size_t>(p.pixel_count())) {
    throw Error("binary patch needs side*side values");
  }
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) throw Error("binary patch values must be 0 or 1");
    p.set(static_cast<int>(i), bits[i] == 1);
  }
  return p;
}

void BinaryPatch::set(int pixel, bool value) {
  const auto word = static_cast<std::size_t>(pixel) / 64;
  const std::uint64_t mask = std::uint64_t{1} << (static_cast<unsigned>(pixel) % 64);
  words_[word] = value ? (words_[word] | mask) : (words_[word] & ~mask);
}

std::vector<int> BinaryPatch::values() const {
  std::vector<int> out(static_cast<std::size_t>(pixel_count()));
  for (int i = 0; i < pixel_count(); ++i) out[static_cast<std::size_t>(i)] = get(i) ? 1 : 0;
  return out;
}

std::size_t BinaryPatch::Hash::operator()(const BinaryPatch& p) const {
  std::size_t h = std::hash<int>{}(p.side_);
  for (const auto w : p.words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

int hamming_distance(const BinaryPatch& a, const BinaryPatch& b) {
  if (a.side_ != b.side_) throw Error("Hamming distance between patches of different sides");
  int d = 0;
  for (std::size_t i = 0; i < a.words_.size(); ++i) d += std::popcount(a.words_[i] ^ b.words_[i]);
  return d;
}

std::vector<BinaryPatch> extract_binary_patches(const LabelMap& segmentation,
                                                const PatchGeometry& geometry, int stride) {
  const int side = geometry.side();
  if (stride < 1) throw Error("binary patch stride must be >= 1");
  if (segmentation.height() < side || segmentation.width() < side) {
    throw Error("window larger than image: patch side " + std::to_string(side));
  }
  std::vector<BinaryPatch> out;
  std::unordered_set<BinaryPatch, BinaryPatch::Hash> seen;
  std::vector<int> ids;
  for (int r = 0; r + side <= segmentation.height(); r += stride) {
    for (int c = 0; c + side <= segmentation.width(); c += stride) {
      ids.clear();
      for (int dr = 0; dr < side; ++dr) {
        for (int dc = 0; dc < side; ++dc) {
          const int id = segmentation.at(r + dr, c + dc);
          if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
        }
      }
      for (const int id : ids) {
        BinaryPatch patch(side);
        for (int dr = 0; dr < side; ++dr) {
          for (int dc = 0; dc < side; ++dc) {
            patch.set(dr * side + dc, segmentation.at(r + dr, c + dc) != id);
          }
        }
        if (seen.insert(patch).second) out.push_back(std::move(patch));
      }
    }
  }
  return out;
}

namespace {

std::int64_t assign_to_medoids(const std::vector<BinaryPatch>& patches, const std::vector<int>& medoids,
                               std::vector<int>& assignment) {
  std::int64_t cost = 0;
  for (std::size_t p = 0; p < patches.size(); ++p) {
    int best = 0;
    int best_d = std::numeric_limits<int>::max();
    for (std::size_t k = 0; k < medoids.size(); ++k) {
      const int d = hamming_distance(patches[p], patches[static_cast<std::size_t>(medoids[k])]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(k);
      }
    }
    assignment[p] = best;
    cost += best_d;
  }
  return cost;
}

}  // namespace

KMedoidsResult kmedoids(const std::vector<BinaryPatch>& patches, const KMedoidsOptions& options) {
  const int n = static_cast<int>(patches.size());
  const int k = options.clusters;
  if (k < 1) throw Error("k-medoids needs at least one cluster");
  if (options.max_iter < 0) throw Error("k-medoids max_iter must be nonnegative");
  {
    std::unordered_set<BinaryPatch, BinaryPatch::Hash> distinct(patches.begin(), patches.end());
    if (static_cast<int>(distinct.size()) < k) {
      throw Error("fewer distinct patches (" + std::to_string(distinct.size()) + ") than requested medoids (" +
                  std::to_string(k) + ")");
    }
  }

  // Farthest-first seeding from a random start.
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  KMedoidsResult result;
  result.medoids.push_back(pick(rng));
  std::vector<int> nearest(static_cast<std::size_t>(n), std::numeric_limits<int>::max());
  while (static_cast<int>(result.medoids.size()) < k) {
    const auto& latest = patches[static_cast<std::size_t>(result.medoids.back())];
    int far = -1;
    int far_d = -1;
    for (int p = 0; p < n; ++p) {
      auto& d = nearest[static_cast<std::size_t>(p)];
      d = std::min(d, hamming_distance(patches[static_cast<std::size_t>(p)], latest));
      if (d > far_d) {
        far_d = d;
        far = p;
      }
    }
    result.medoids.push_back(far);
  }

  result.assignment.assign(static_cast<std::size_t>(n), 0);
  result.cost = assign_to_medoids(patches, result.medoids, result.assignment);
  result.cost_history.push_back(result.cost);

  std::vector<std::vector<int>> members(static_cast<std::size_t>(k));
  for (int it = 0; it < options.max_iter; ++it) {
    for (auto& m : members) m.clear();
    for (int p = 0; p < n; ++p) members[static_cast<std::size_t>(result.assignment[static_cast<std::size_t>(p)])].push_back(p);

    bool changed = false;
    for (int c = 0; c < k; ++c) {
      const auto& group = members[static_cast<std::size_t>(c)];
      std::vector<std::int64_t> total(group.size(), 0);
      parallel_for(static_cast<int>(group.size()), options.workers, [&](int i) {
        std::int64_t sum = 0;
        const auto& cand = patches[static_cast<std::size_t>(group[static_cast<std::size_t>(i)])];
        for (const int q : group) sum += hamming_distance(cand, patches[static_cast<std::size_t>(q)]);
        total[static_cast<std::size_t>(i)] = sum;
      });
      const int current = result.medoids[static_cast<std::size_t>(c)];
      std::int64_t best_total = std::numeric_limits<std::int64_t>::max();
      int best = current;
      for (std::size_t i = 0; i < group.size(); ++i) {
        if (group[i] == current) best_total = std::min(best_total, total[i]);
      }
      for (std::size_t i = 0; i < group.size(); ++i) {
        if (total[i] < best_total) {
          best_total = total[i];
          best = group[i];
        }
      }
      if (best != current) {
        result.medoids[static_cast<std::size_t>(c)] = best;
        changed = true;
      }
    }

    const std::vector<int> previous = result.assignment;
    result.cost = assign_to_medoids(patches, result.medoids, result.assignment);
    result.cost_history.push_back(result.cost);
    result.iterations = it + 1;
    if (!changed && previous == result.assignment) {
      result.converged = true;
      break;
    }
  }
  return result;
}

Shapelet binary_patch_to_shapelet(const BinaryPatch& patch) {
  const int side = patch.side();
  const int z = patch.pixel_count();
  std::vector<int> region(static_cast<std::size_t>(z), 0);
  std::vector<int> stack;
  int next = 0;
  for (int start = 0; start < z; ++start) {
    if (region[static_cast<std::size_t>(start)] != 0) continue;
    const bool value = patch.get(start);
    region[static_cast<std::size_t>(start)] = ++next;
    stack.push_back(start);
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      const int r = p / side, c = p % side;
      const int nbrs[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
      for (const auto& nb : nbrs) {
        if (nb[0] < 0 || nb[0] >= side || nb[1] < 0 || nb[1] >= side) continue;
        const int q = nb[0] * side + nb[1];
        if (region[static_cast<std::size_t>(q)] == 0 && patch.get(q) == value) {
          region[static_cast<std::size_t>(q)] = next;
          stack.push_back(q);
        }
      }
    }
  }
  return Shapelet::from_region_map(side, std::move(region));
}

ShapeletSet medoids_to_shapelets(const std::vector<BinaryPatch>& medoids) {
  std::vector<Shapelet> shapelets;
  shapelets.reserve(medoids.size());
  for (const auto& m : medoids) shapelets.push_back(binary_patch_to_shapelet(m));
  return ShapeletSet(std::move(shapelets));
}

ShapeletSet learn_shapelets(const LabelMap& segmentation, const PatchGeometry& geometry,
                            const KMedoidsOptions& options, int stride) {
  const auto patches = extract_binary_patches(segmentation, geometry, stride);
  const auto clustering = kmedoids(patches, options);
  std::vector<BinaryPatch> medoids;
  for (const int m : clustering.medoids) medoids.push_back(patches[static_cast<std::size_t>(m)]);
  return medoids_to_shapelets(medoids);
}

namespace {

// Dyadic supports of one Haar level: `per_axis` x `per_axis` squares, row-major.
struct Support {
  int r0, r1, c0, c1;  // half-open
};

std::vector<Support> level_supports(int side, int per_axis) {
  std::vector<Support> out;
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < per_axis; ++j) {
      out.push_back({i * side / per_axis, (i + 1) * side / per_axis, j * side / per_axis, (j + 1) * side / per_axis});
    }
  }
  return out;
}

// Relabels region ids to 1..R in row-major first-occurrence order.
std::vector<int> canonical_regions(const std::vector<int>& raw) {
  std::vector<int> out(raw.size());
  std::vector<std::pair<int, int>> seen;
  for (std::size_t p = 0; p < raw.size(); ++p) {
    auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& e) { return e.first == raw[p]; });
    if (it == seen.end()) {
      seen.emplace_back(raw[p], static_cast<int>(seen.size()) + 1);
      it = seen.end() - 1;
    }
    out[p] = it->second;
  }
  return out;
}

}  // namespace

int max_haar_shapelets(int side) {
  int count = 1;
  for (int per_axis = 1; side / per_axis >= 2; per_axis *= 2) count += 3 * per_axis * per_axis;
  return count;
}

ShapeletSet haar_shapelets(int side, int count) {
  if (side < 2) throw Error("Haar shapelets need side >= 2");
  if (count < 1) throw Error("Haar shapelet count must be >= 1");
  if (count > max_haar_shapelets(side)) {
    throw Error("requested " + std::to_string(count) + " Haar shapelets but side " + std::to_string(side) +
                " provides only " + std::to_string(max_haar_shapelets(side)));
  }
  const auto z = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
  std::vector<Shapelet> out;
  out.push_back(Shapelet::from_region_map(side, std::vector<int>(z, 1)));
  // Each wavelet splits its support into two halves (vertical, horizontal)
  // or a two-region checkerboard of its quadrants (diagonal); pixels outside
  // the support form one further region.
  for (int per_axis = 1; static_cast<int>(out.size()) < count; per_axis *= 2) {
    for (const auto& s : level_supports(side, per_axis)) {
      const int rm = (s.r0 + s.r1) / 2, cm = (s.c0 + s.c1) / 2;
      for (int orientation = 0; orientation < 3 && static_cast<int>(out.size()) < count; ++orientation) {
        std::vector<int> raw(z, 0);
        for (int r = s.r0; r < s.r1; ++r) {
          for (int c = s.c0; c < s.c1; ++c) {
            const bool right = c >= cm, lower = r >= rm;
            int id = 0;
            switch (orientation) {
              case 0: id = right ? 2 : 1; break;          // vertical split
              case 1: id = lower ? 2 : 1; break;          // horizontal split
              default: id = right == lower ? 1 : 2; break;  // diagonal
            }
            raw[static_cast<std::size_t>(r * side + c)] = id;
          }
        }
        out.push_back(Shapelet::from_region_map(side, canonical_regions(raw)));
      }
      if (static_cast<int>(out.size()) >= count) break;
    }
  }
  return ShapeletSet(std::move(out));
}

}  // namespace shapedc
