#include "cli.hpp"

#include "shapedc/shapedc.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

namespace shapedc::cli {
namespace {

namespace fs = std::filesystem;

struct Settings {
  // segmentation
  int target_size = 20;
  double compactness = 1.0;
  int iterations = 10;
  // shapelets
  int num_shapelets = 10;
  int patch_side = 9;
  bool haar = false;
  int stride = 1;
  int max_iter = 100;
  std::uint64_t seed = 0;
  // classification
  int sparsity = 3;
  double gamma = 1.0;
  double omega = 1.0;
  double vote_eps = 1e-6;
  int workers = 0;
};

struct CubeInput {
  std::string header;
  std::string data;

  HyperCube load() const {
    const fs::path data_path = data.empty() ? fs::path(header).replace_extension(".bsq") : fs::path(data);
    return z_normalize(read_cube(header, data_path));
  }
};

void add_cube_options(CLI::App* sub, CubeInput& cube) {
  sub->add_option("--cube", cube.header, "Cube header file")->required();
  sub->add_option("--data", cube.data, "Cube data file (default: header path with .bsq extension)");
}

/// Files written by a command. Unless commit() is called they are deleted
/// when the guard goes out of scope.
class OutputGuard {
 public:
  OutputGuard() = default;
  OutputGuard(const OutputGuard&) = delete;
  OutputGuard& operator=(const OutputGuard&) = delete;
  ~OutputGuard() {
    if (committed_) return;
    for (const auto& p : paths_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

  const fs::path& add(fs::path p) { return paths_.emplace_back(std::move(p)); }
  void commit() { committed_ = true; }

 private:
  std::vector<fs::path> paths_;
  bool committed_ = false;
};

ShapeletSet make_shapelets(const LabelMap& segmentation, const Settings& s) {
  if (s.haar) return haar_shapelets(s.patch_side, s.num_shapelets);
  return learn_shapelets(segmentation, PatchGeometry(s.patch_side),
                         {s.num_shapelets, s.max_iter, s.seed, resolve_workers(s.workers)}, s.stride);
}

ClassifyOptions classify_options(const Settings& s) {
  ClassifyOptions o;
  o.sparsity = s.sparsity;
  o.mrf = {s.gamma, s.omega};
  o.vote_eps = s.vote_eps;
  o.workers = resolve_workers(s.workers);
  return o;
}

TrainingSet load_training(const HyperCube& cube, const std::string& path) {
  const auto mask = read_label_map(path);
  if (mask.height() != cube.height() || mask.width() != cube.width()) {
    throw Error("training mask is " + std::to_string(mask.height()) + "x" + std::to_string(mask.width()) +
                " but the cube is " + std::to_string(cube.height()) + "x" + std::to_string(cube.width()));
  }
  return TrainingSet::from_mask(cube, mask);
}

LabelMap load_test(const HyperCube& cube, const std::string& path) {
  auto mask = read_label_map(path);
  if (mask.height() != cube.height() || mask.width() != cube.width()) {
    throw Error("test mask does not match the cube dimensions");
  }
  return mask;
}

std::string default_metrics_path(const std::string& map_path) {
  fs::path p(map_path);
  return (p.parent_path() / (p.stem().string() + "_metrics.csv")).string();
}

std::string format_real(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.setf(std::ios::fixed);
  os.precision(6);
  os << v;
  return os.str();
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  Settings s;
  CLI::App app{"Shapelet-based sparse-representation classification of hyperspectral images", "shape_dc"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  app.add_option("--target-size", s.target_size, "Superpixel side in pixels")->check(CLI::Range(2, 1 << 20));
  app.add_option("--compactness", s.compactness, "SLIC spatial weight")->check(CLI::NonNegativeNumber);
  app.add_option("--iterations", s.iterations, "SLIC iterations")->check(CLI::NonNegativeNumber);
  app.add_option("--num-shapelets", s.num_shapelets, "Number of shapelets N")->check(CLI::Range(1, 1 << 20));
  app.add_option("--patch-side", s.patch_side, "Patch side in pixels")->check(CLI::Range(2, 1 << 20));
  app.add_flag("--haar", s.haar, "Use the Haar basis instead of learned shapelets");
  app.add_option("--stride", s.stride, "Binary patch sampling stride")->check(CLI::Range(1, 1 << 20));
  app.add_option("--max-iter", s.max_iter, "k-medoids iteration limit")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", s.seed, "Random seed");
  app.add_option("--sparsity", s.sparsity, "OMP sparsity W")->check(CLI::Range(1, 1 << 20));
  app.add_option("--gamma", s.gamma, "Histogram prior weight")->check(CLI::NonNegativeNumber);
  app.add_option("--omega", s.omega, "Label agreement weight")->check(CLI::NonNegativeNumber);
  app.add_option("--vote-eps", s.vote_eps, "Residual clamp for votes")->check(CLI::PositiveNumber);
  app.add_option("--workers", s.workers, "Worker threads (default: $SHAPE_DC_WORKERS or all cores)")
      ->check(CLI::NonNegativeNumber);

  // segment
  CubeInput seg_cube;
  std::string seg_out;
  auto* segment = app.add_subcommand("segment", "SLIC superpixels of the z-normalized cube")->fallthrough();
  add_cube_options(segment, seg_cube);
  segment->add_option("--out", seg_out, "Segmentation label map")->required();

  // shapelets
  std::string shp_seg, shp_out;
  auto* shapelets = app.add_subcommand("shapelets", "Learn shapelets from a segmentation")->fallthrough();
  shapelets->add_option("--segmentation", shp_seg, "Segmentation label map (not needed with --haar)");
  shapelets->add_option("--out", shp_out, "Shapelet file")->required();

  // classify
  CubeInput cls_cube;
  std::string cls_train, cls_shapelets, cls_test, cls_out, cls_metrics;
  auto* classify = app.add_subcommand("classify", "Classify every pixel of the cube")->fallthrough();
  add_cube_options(classify, cls_cube);
  classify->add_option("--train", cls_train, "Training mask")->required();
  classify->add_option("--shapelets", cls_shapelets, "Shapelet file")->required();
  classify->add_option("--out", cls_out, "Output label map")->required();
  classify->add_option("--test", cls_test, "Test mask; enables metrics output");
  classify->add_option("--metrics", cls_metrics, "Metrics CSV (default: <out stem>_metrics.csv)");

  // sweep
  CubeInput sw_cube;
  std::string sw_train, sw_test, sw_out;
  std::vector<int> sw_shapelets{10}, sw_sides{9}, sw_sparsity{3}, sw_sizes{20};
  auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep")->fallthrough();
  add_cube_options(sweep, sw_cube);
  sweep->add_option("--train", sw_train, "Training mask")->required();
  sweep->add_option("--test", sw_test, "Test mask")->required();
  sweep->add_option("--out", sw_out, "Result CSV")->required();
  sweep->add_option("--shapelet-counts", sw_shapelets, "Values of N")->delimiter(',')->check(CLI::Range(1, 1 << 20));
  sweep->add_option("--patch-sides", sw_sides, "Values of the patch side")->delimiter(',')->check(CLI::Range(2, 1 << 20));
  sweep->add_option("--sparsities", sw_sparsity, "Values of W")->delimiter(',')->check(CLI::Range(1, 1 << 20));
  sweep->add_option("--target-sizes", sw_sizes, "Superpixel sizes")->delimiter(',')->check(CLI::Range(2, 1 << 20));

  // synth
  SynthOptions synth_opts;
  std::string syn_cube, syn_train, syn_test, syn_truth, syn_layout = "blocky", syn_dtype = "f32";
  auto* synth = app.add_subcommand("synth", "Write a synthetic scene with known ground truth");
  synth->add_option("--cube", syn_cube, "Cube header to write (data goes next to it with .bsq)")->required();
  synth->add_option("--train", syn_train, "Training mask to write")->required();
  synth->add_option("--test", syn_test, "Test mask to write")->required();
  synth->add_option("--truth", syn_truth, "Full ground truth to write");
  synth->add_option("--height", synth_opts.height)->check(CLI::PositiveNumber);
  synth->add_option("--width", synth_opts.width)->check(CLI::PositiveNumber);
  synth->add_option("--bands", synth_opts.bands)->check(CLI::Range(2, 1 << 20));
  synth->add_option("--classes", synth_opts.classes)->check(CLI::PositiveNumber);
  synth->add_option("--block-min", synth_opts.block_min)->check(CLI::PositiveNumber);
  synth->add_option("--block-max", synth_opts.block_max)->check(CLI::PositiveNumber);
  synth->add_option("--noise-sigma", synth_opts.noise_sigma)->check(CLI::NonNegativeNumber);
  synth->add_option("--separation", synth_opts.separation, "Closest class-mean distance in noise sigmas")
      ->check(CLI::PositiveNumber);
  synth->add_option("--train-per-class", synth_opts.train_per_class)->check(CLI::PositiveNumber);
  synth->add_option("--layout", syn_layout)->check(CLI::IsMember({"blocky", "diagonal"}));
  synth->add_option("--scene-seed", synth_opts.seed, "Scene generator seed");
  synth->add_option("--dtype", syn_dtype)->check(CLI::IsMember({"f32", "f64"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  OutputGuard guard;
  try {
    if (segment->parsed()) {
      const auto cube = seg_cube.load();
      const auto seg = slic_segment(cube, {s.target_size, s.compactness, s.iterations, resolve_workers(s.workers)});
      write_label_map(seg.labels, guard.add(seg_out));
    } else if (shapelets->parsed()) {
      LabelMap seg;
      if (!s.haar) {
        if (shp_seg.empty()) throw Error("--segmentation is required unless --haar is given");
        seg = read_label_map(shp_seg);
      }
      write_shapelets(make_shapelets(seg, s), guard.add(shp_out));
    } else if (classify->parsed()) {
      const auto cube = cls_cube.load();
      const auto training = load_training(cube, cls_train);
      const auto set = read_shapelets(cls_shapelets);
      const auto map = classify_image(cube, training, set, classify_options(s));
      std::optional<MetricsReport> report;
      if (!cls_test.empty()) report = evaluate(map, load_test(cube, cls_test), training.class_count());
      write_label_map(map, guard.add(cls_out));
      if (report) write_metrics(*report, guard.add(cls_metrics.empty() ? default_metrics_path(cls_out) : cls_metrics));
    } else if (sweep->parsed()) {
      const auto cube = sw_cube.load();
      const auto training = load_training(cube, sw_train);
      const auto test = load_test(cube, sw_test);
      std::map<int, LabelMap> segmentations;
      std::string csv = "num_shapelets,patch_side,W,superpixel_size,OA,AA,kappa\n";
      for (const int n : sw_shapelets) {
        for (const int side : sw_sides) {
          for (const int w : sw_sparsity) {
            for (const int size : sw_sizes) {
              Settings point = s;
              point.num_shapelets = n;
              point.patch_side = side;
              point.sparsity = w;
              point.target_size = size;
              if (!point.haar && !segmentations.contains(size)) {
                segmentations[size] =
                    slic_segment(cube, {size, s.compactness, s.iterations, resolve_workers(s.workers)}).labels;
              }
              const auto set = make_shapelets(point.haar ? LabelMap{} : segmentations[size], point);
              const auto map = classify_image(cube, training, set, classify_options(point));
              const auto r = evaluate(map, test, training.class_count());
              csv += join(std::vector<int>{n, side, w, size}) + "," + format_real(r.overall) + "," +
                     format_real(r.average) + "," + format_real(r.kappa) + "\n";
              std::clog << "sweep N=" << n << " side=" << side << " W=" << w << " size=" << size
                        << " OA=" << format_real(r.overall) << "\n";
            }
          }
        }
      }
      write_text_file(guard.add(sw_out), csv);
    } else if (synth->parsed()) {
      synth_opts.layout = syn_layout == "diagonal" ? SceneLayout::diagonal : SceneLayout::blocky;
      const auto scene = make_synthetic_scene(synth_opts);
      const fs::path header(syn_cube);
      const fs::path data = fs::path(syn_cube).replace_extension(".bsq");
      guard.add(header);
      guard.add(data);
      write_cube(scene.cube, syn_dtype == "f64" ? SampleType::f64 : SampleType::f32, header, data);
      write_label_map(scene.train, guard.add(syn_train));
      write_label_map(scene.test, guard.add(syn_test));
      if (!syn_truth.empty()) write_label_map(scene.truth, guard.add(syn_truth));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  guard.commit();
  return 0;
}

}  // namespace shapedc::cli
