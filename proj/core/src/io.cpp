#include "shapedc/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

namespace shapedc {
namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

long long parse_integer(std::string_view token, const std::string& what) {
  long long value = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw Error("invalid integer '" + std::string(token) + "' in " + what);
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::vector<std::string_view> nonblank_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(pos, nl - pos));
    if (!line.empty()) lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

std::string fixed6(double value) {
  if (value != value) return "nan";
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, 6);
  if (ec != std::errc{}) throw Error("failed to format value");
  return std::string(buf.data(), ptr);
}

template <typename T>
T from_little_endian(const unsigned char* bytes) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U raw = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) raw |= static_cast<U>(bytes[i]) << (8 * i);
  return std::bit_cast<T>(raw);
}

template <typename T>
void to_little_endian(T value, unsigned char* bytes) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U raw = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(raw >> (8 * i));
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error("I/O failure while writing '" + path.string() + "'");
}

CubeHeader read_cube_header(const std::filesystem::path& header_path) {
  const std::string text = read_text_file(header_path);
  std::map<std::string, std::string, std::less<>> kv;
  for (const auto line : nonblank_lines(text)) {
    if (line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error("malformed header line '" + std::string(line) + "' (expected key=value)");
    }
    kv[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
  }
  auto require = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw Error(std::string("missing key '") + key + "' in cube header");
    return it->second;
  };
  auto count = [&](const char* key) {
    const long long v = parse_integer(require(key), std::string("header key '") + key + "'");
    if (v < 1 || v > (1LL << 30)) throw Error(std::string("header key '") + key + "' must be >= 1");
    return static_cast<int>(v);
  };

  CubeHeader header;
  header.height = count("height");
  header.width = count("width");
  header.bands = count("bands");
  const auto& dtype = require("dtype");
  if (dtype == "f32") {
    header.dtype = SampleType::f32;
  } else if (dtype == "f64") {
    header.dtype = SampleType::f64;
  } else {
    throw Error("unsupported dtype '" + dtype + "'");
  }
  if (const auto& il = require("interleave"); il != "bsq") {
    throw Error("unsupported interleave '" + il + "'");
  }
  if (const auto& bo = require("byte_order"); bo != "little") {
    throw Error("unsupported byte_order '" + bo + "'");
  }
  return header;
}

void write_cube_header(const CubeHeader& header, const std::filesystem::path& header_path) {
  std::string text;
  text += "height=" + std::to_string(header.height) + "\n";
  text += "width=" + std::to_string(header.width) + "\n";
  text += "bands=" + std::to_string(header.bands) + "\n";
  text += std::string("dtype=") + (header.dtype == SampleType::f32 ? "f32" : "f64") + "\n";
  text += "interleave=bsq\n";
  text += "byte_order=little\n";
  write_text_file(header_path, text);
}

HyperCube read_cube(const std::filesystem::path& header_path,
                    const std::filesystem::path& data_path) {
  const CubeHeader header = read_cube_header(header_path);
  const std::string bytes = read_text_file(data_path);
  if (bytes.size() != header.byte_size()) {
    throw Error("size mismatch: data file '" + data_path.string() + "' has " +
                std::to_string(bytes.size()) + " bytes, header requires " +
                std::to_string(header.byte_size()));
  }
  const std::size_t plane = static_cast<std::size_t>(header.height) *
                            static_cast<std::size_t>(header.width);
  const auto bands = static_cast<std::size_t>(header.bands);
  const std::size_t width = header.dtype == SampleType::f32 ? 4 : 8;
  const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data());
  std::vector<double> values(header.value_count());
  for (std::size_t b = 0; b < bands; ++b) {
    for (std::size_t p = 0; p < plane; ++p) {
      const unsigned char* src = raw + (b * plane + p) * width;
      values[p * bands + b] = header.dtype == SampleType::f32
                                  ? static_cast<double>(from_little_endian<float>(src))
                                  : from_little_endian<double>(src);
    }
  }
  return HyperCube::from_pixel_interleaved(header.height, header.width, header.bands,
                                           std::move(values));
}

void write_cube(const HyperCube& cube, SampleType dtype,
                const std::filesystem::path& header_path,
                const std::filesystem::path& data_path) {
  const CubeHeader header{cube.height(), cube.width(), cube.bands(), dtype};
  const std::size_t plane = cube.pixel_count();
  const auto bands = static_cast<std::size_t>(cube.bands());
  const std::size_t width = dtype == SampleType::f32 ? 4 : 8;
  std::string bytes(header.byte_size(), '\0');
  auto* dst = reinterpret_cast<unsigned char*>(bytes.data());
  const auto values = cube.values();
  for (std::size_t b = 0; b < bands; ++b) {
    for (std::size_t p = 0; p < plane; ++p) {
      unsigned char* out = dst + (b * plane + p) * width;
      const double v = values[p * bands + b];
      if (dtype == SampleType::f32) {
        to_little_endian(static_cast<float>(v), out);
      } else {
        to_little_endian(v, out);
      }
    }
  }
  write_cube_header(header, header_path);
  write_text_file(data_path, bytes);
}

LabelMap parse_label_map(const std::string& text) {
  const auto lines = nonblank_lines(text);
  if (lines.empty()) throw Error("label map is empty");
  const auto dims = split_ws(lines[0]);
  if (dims.size() != 2) throw Error("label map header must be 'height width'");
  const long long h = parse_integer(dims[0], "label map height");
  const long long w = parse_integer(dims[1], "label map width");
  if (h < 1 || w < 1) throw Error("label map dimensions must be >= 1");
  if (static_cast<long long>(lines.size()) - 1 != h) {
    throw Error("label map declares " + std::to_string(h) + " rows but has " +
                std::to_string(lines.size() - 1));
  }
  std::vector<int> values;
  values.reserve(static_cast<std::size_t>(h * w));
  for (long long r = 0; r < h; ++r) {
    const auto tokens = split_ws(lines[static_cast<std::size_t>(r + 1)]);
    if (static_cast<long long>(tokens.size()) != w) {
      throw Error("ragged row " + std::to_string(r) + ": expected " + std::to_string(w) +
                  " entries, got " + std::to_string(tokens.size()));
    }
    for (const auto t : tokens) {
      const long long v = parse_integer(t, "label map");
      if (v < 0) throw Error("negative label " + std::to_string(v) + " in row " + std::to_string(r));
      values.push_back(static_cast<int>(v));
    }
  }
  return LabelMap::from_values(static_cast<int>(h), static_cast<int>(w), std::move(values));
}

std::string format_label_map(const LabelMap& map) {
  std::string out = std::to_string(map.height()) + " " + std::to_string(map.width()) + "\n";
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      if (c) out += ' ';
      out += std::to_string(map.at(r, c));
    }
    out += '\n';
  }
  return out;
}

LabelMap read_label_map(const std::filesystem::path& path) {
  return parse_label_map(read_text_file(path));
}

void write_label_map(const LabelMap& map, const std::filesystem::path& path) {
  write_text_file(path, format_label_map(map));
}

ShapeletSet parse_shapelets(const std::string& text) {
  const auto lines = nonblank_lines(text);
  if (lines.empty()) throw Error("shapelet file is empty");
  const auto head = split_ws(lines[0]);
  if (head.size() != 2) throw Error("shapelet file header must be 'N side'");
  const long long n = parse_integer(head[0], "shapelet count");
  const long long side = parse_integer(head[1], "shapelet side");
  if (n < 1 || side < 1) throw Error("shapelet count and side must be >= 1");
  const auto expected_lines = static_cast<std::size_t>(1 + n * (side + 1));
  if (lines.size() != expected_lines) {
    throw Error("shapelet file has " + std::to_string(lines.size()) + " lines, expected " +
                std::to_string(expected_lines));
  }
  std::vector<Shapelet> shapelets;
  std::size_t li = 1;
  for (long long s = 0; s < n; ++s) {
    const auto r_tokens = split_ws(lines[li++]);
    if (r_tokens.size() != 1) throw Error("shapelet " + std::to_string(s) + ": expected region count line");
    const long long regions = parse_integer(r_tokens[0], "region count");
    std::vector<int> map;
    map.reserve(static_cast<std::size_t>(side * side));
    for (long long r = 0; r < side; ++r) {
      const auto tokens = split_ws(lines[li++]);
      if (static_cast<long long>(tokens.size()) != side) {
        throw Error("shapelet " + std::to_string(s) + ": ragged row " + std::to_string(r));
      }
      for (const auto t : tokens) map.push_back(static_cast<int>(parse_integer(t, "region map")));
    }
    auto shapelet = Shapelet::from_region_map(static_cast<int>(side), std::move(map));
    if (shapelet.region_count() != regions) {
      throw Error("shapelet " + std::to_string(s) + ": declared " + std::to_string(regions) +
                  " regions but map has " + std::to_string(shapelet.region_count()));
    }
    shapelets.push_back(std::move(shapelet));
  }
  return ShapeletSet(std::move(shapelets));
}

std::string format_shapelets(const ShapeletSet& set) {
  const int side = set.side();
  std::string out = std::to_string(set.size()) + " " + std::to_string(side) + "\n";
  for (const auto& s : set.shapelets()) {
    out += std::to_string(s.region_count()) + "\n";
    for (int r = 0; r < side; ++r) {
      for (int c = 0; c < side; ++c) {
        if (c) out += ' ';
        out += std::to_string(s.region_at(r * side + c));
      }
      out += '\n';
    }
  }
  return out;
}

ShapeletSet read_shapelets(const std::filesystem::path& path) {
  return parse_shapelets(read_text_file(path));
}

void write_shapelets(const ShapeletSet& set, const std::filesystem::path& path) {
  write_text_file(path, format_shapelets(set));
}

std::string format_metrics(const MetricsReport& report) {
  std::string out;
  for (const auto& row : report.confusion) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += std::to_string(row[j]);
    }
    out += '\n';
  }
  for (std::size_t k = 0; k < report.class_accuracy.size(); ++k) {
    const auto& acc = report.class_accuracy[k];
    out += "class_acc," + std::to_string(k + 1) + "," + (acc ? fixed6(*acc) : std::string("nan")) + "\n";
  }
  out += "overall," + fixed6(report.overall) + "\n";
  out += "average," + fixed6(report.average) + "\n";
  out += "kappa," + fixed6(report.kappa) + "\n";
  return out;
}

void write_metrics(const MetricsReport& report, const std::filesystem::path& path) {
  write_text_file(path, format_metrics(report));
}

}  // namespace shapedc
