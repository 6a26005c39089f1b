#include "support.hpp"

#include <doctest.h>

#include <cstring>
#include <fstream>

using namespace shapedc;
using shapedc::testing::TempDir;

namespace {

void write_bytes(const std::filesystem::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<unsigned char> f32_le(const std::vector<float>& values) {
  std::vector<unsigned char> out;
  for (const float v : values) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(bits >> (8 * i)));
  }
  return out;
}

const char* kHeader2x2 = "height=2\nwidth=2\nbands=1\ndtype=f32\ninterleave=bsq\nbyte_order=little\n";

}  // namespace

TEST_CASE("read_cube decodes a little-endian f32 BSQ file") {
  TempDir dir("io");
  write_text_file(dir / "c.hdr", kHeader2x2);
  write_bytes(dir / "c.bsq", f32_le({0, 1, 2, 3}));
  const auto cube = read_cube(dir / "c.hdr", dir / "c.bsq");
  CHECK(cube.height() == 2);
  CHECK(cube.bands() == 1);
  CHECK(cube.at(0, 0, 0) == 0.0);
  CHECK(cube.at(0, 1, 0) == 1.0);
  CHECK(cube.at(1, 1, 0) == 3.0);
}

TEST_CASE("read_cube maps band-sequential order to pixels") {
  TempDir dir("io");
  write_text_file(dir / "c.hdr", "height=1\nwidth=2\nbands=2\ndtype=f32\ninterleave=bsq\nbyte_order=little\n");
  write_bytes(dir / "c.bsq", f32_le({10, 11, 20, 21}));
  const auto cube = read_cube(dir / "c.hdr", dir / "c.bsq");
  CHECK(cube.at(0, 0, 1) == 20.0);
  CHECK(cube.at(0, 1, 0) == 11.0);
}

TEST_CASE("read_cube rejects size mismatches in both directions") {
  TempDir dir("io");
  write_text_file(dir / "c.hdr", kHeader2x2);
  auto bytes = f32_le({0, 1, 2, 3});
  bytes.pop_back();
  write_bytes(dir / "short.bsq", bytes);
  CHECK_THROWS_WITH_AS(read_cube(dir / "c.hdr", dir / "short.bsq"), doctest::Contains("size mismatch"), Error);
  bytes.push_back(0);
  bytes.push_back(0);
  write_bytes(dir / "long.bsq", bytes);
  CHECK_THROWS_WITH_AS(read_cube(dir / "c.hdr", dir / "long.bsq"), doctest::Contains("size mismatch"), Error);
}

TEST_CASE("header errors") {
  TempDir dir("io");
  write_bytes(dir / "c.bsq", f32_le({0, 1, 2, 3}));
  write_text_file(dir / "bil.hdr", "height=2\nwidth=2\nbands=1\ndtype=f32\ninterleave=bil\nbyte_order=little\n");
  CHECK_THROWS_WITH_AS(read_cube(dir / "bil.hdr", dir / "c.bsq"), doctest::Contains("unsupported interleave"), Error);
  write_text_file(dir / "i16.hdr", "height=2\nwidth=2\nbands=1\ndtype=i16\ninterleave=bsq\nbyte_order=little\n");
  CHECK_THROWS_WITH_AS(read_cube(dir / "i16.hdr", dir / "c.bsq"), doctest::Contains("unsupported dtype"), Error);
  write_text_file(dir / "nokey.hdr", "height=2\nwidth=2\ndtype=f32\ninterleave=bsq\nbyte_order=little\n");
  CHECK_THROWS_WITH_AS(read_cube(dir / "nokey.hdr", dir / "c.bsq"), doctest::Contains("missing key"), Error);
  write_text_file(dir / "be.hdr", "height=2\nwidth=2\nbands=1\ndtype=f32\ninterleave=bsq\nbyte_order=big\n");
  CHECK_THROWS_AS(read_cube(dir / "be.hdr", dir / "c.bsq"), Error);
  CHECK_THROWS_AS(read_cube(dir / "missing.hdr", dir / "c.bsq"), Error);
}

TEST_CASE("cube round trip is bit-exact for f32 and f64") {
  TempDir dir("io");
  std::mt19937_64 rng(3);
  const auto cube = shapedc::testing::random_cube(4, 5, 3, rng);
  write_cube(cube, SampleType::f64, dir / "d.hdr", dir / "d.bsq");
  const auto back64 = read_cube(dir / "d.hdr", dir / "d.bsq");
  CHECK(std::equal(cube.values().begin(), cube.values().end(), back64.values().begin(), back64.values().end()));

  std::vector<double> rounded(cube.values().begin(), cube.values().end());
  for (auto& v : rounded) v = static_cast<float>(v);
  const auto cube32 = HyperCube::from_pixel_interleaved(4, 5, 3, rounded);
  write_cube(cube32, SampleType::f32, dir / "f.hdr", dir / "f.bsq");
  const auto back32 = read_cube(dir / "f.hdr", dir / "f.bsq");
  CHECK(std::equal(rounded.begin(), rounded.end(), back32.values().begin(), back32.values().end()));
  CHECK(std::filesystem::file_size(dir / "f.bsq") == 4u * 5 * 3 * 4);
}

TEST_CASE("label map parsing") {
  const auto m = parse_label_map("1 3\n0 1 2");
  CHECK(m.height() == 1);
  CHECK(m.width() == 3);
  CHECK(std::vector<int>(m.values().begin(), m.values().end()) == std::vector<int>{0, 1, 2});
  CHECK_THROWS_WITH_AS(parse_label_map("1 3\n0 1"), doctest::Contains("ragged row"), Error);
  CHECK_THROWS_WITH_AS(parse_label_map("1 3\n0 -1 2"), doctest::Contains("negative label"), Error);
  CHECK_THROWS_AS(parse_label_map("2 3\n0 1 2"), Error);
  CHECK_THROWS_AS(parse_label_map("1 1\nx"), Error);
}

TEST_CASE("label map formatting and round trip") {
  CHECK(format_label_map(LabelMap::from_values(1, 1, {5})) == "1 1\n5\n");
  CHECK(format_label_map(LabelMap(2, 2)) == "2 2\n0 0\n0 0\n");
  TempDir dir("io");
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> label(0, 9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> v(9);
    for (auto& x : v) x = label(rng);
    const auto m = LabelMap::from_values(3, 3, v);
    write_label_map(m, dir / "m.txt");
    CHECK(read_label_map(dir / "m.txt") == m);
  }
}

TEST_CASE("shapelet file round trip") {
  const ShapeletSet set({Shapelet::from_region_map(3, {1, 1, 2, 1, 1, 2, 3, 3, 2}),
                         Shapelet::from_region_map(3, std::vector<int>(9, 1))});
  const auto text = format_shapelets(set);
  CHECK(text.rfind("2 3\n3\n1 1 2\n", 0) == 0);
  CHECK(parse_shapelets(text) == set);
  CHECK_THROWS_AS(parse_shapelets("1 2\n2\n1 1\n1 1\n"), Error);
  CHECK_THROWS_AS(parse_shapelets("1 2\n1\n1 1\n"), Error);
}

TEST_CASE("metrics CSV layout") {
  const auto r = report_from_confusion({{45, 5}, {10, 40}});
  const auto csv = format_metrics(r);
  CHECK(csv ==
        "45,5\n10,40\nclass_acc,1,0.900000\nclass_acc,2,0.800000\noverall,0.850000\naverage,0.850000\n"
        "kappa,0.700000\n");
  const auto perfect = format_metrics(report_from_confusion({{4, 0}, {0, 6}}));
  CHECK(perfect.find("kappa,1.000000\n") != std::string::npos);
  const auto chance = format_metrics(report_from_confusion({{25, 25}, {25, 25}}));
  CHECK(chance.find("overall,0.500000\n") != std::string::npos);
  const auto absent = format_metrics(report_from_confusion({{2, 0}, {0, 0}}));
  CHECK(absent.find("class_acc,2,nan\n") != std::string::npos);
}
