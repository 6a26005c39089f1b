#pragma once

// File formats.
//
// Cube: a key=value text header (height, width, bands, dtype, interleave,
// byte_order) plus a raw data file holding height*width*bands values,
// band-sequential, row-major within each band, little-endian, f32 or f64.
//
// Label map: "height width" on the first line, then `height` lines of
// `width` space-separated nonnegative integers.
//
// Shapelet set: "N side", then per shapelet a line "R" followed by `side`
// lines of `side` region ids.
//
// All text is parsed and written locale-independently.

#include "shapedc/metrics.hpp"
#include "shapedc/types.hpp"

#include <filesystem>
#include <string>

namespace shapedc {

enum class SampleType { f32, f64 };

struct CubeHeader {
  int height = 0;
  int width = 0;
  int bands = 0;
  SampleType dtype = SampleType::f32;

  std::size_t value_count() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width) *
           static_cast<std::size_t>(bands);
  }
  std::size_t byte_size() const {
    return value_count() * (dtype == SampleType::f32 ? 4u : 8u);
  }
};

CubeHeader read_cube_header(const std::filesystem::path& header_path);
void write_cube_header(const CubeHeader& header, const std::filesystem::path& header_path);

HyperCube read_cube(const std::filesystem::path& header_path,
                    const std::filesystem::path& data_path);

/// Writes header and BSQ data. With f32 the values are rounded to float.
void write_cube(const HyperCube& cube, SampleType dtype,
                const std::filesystem::path& header_path,
                const std::filesystem::path& data_path);

LabelMap parse_label_map(const std::string& text);
std::string format_label_map(const LabelMap& map);
LabelMap read_label_map(const std::filesystem::path& path);
void write_label_map(const LabelMap& map, const std::filesystem::path& path);

ShapeletSet parse_shapelets(const std::string& text);
std::string format_shapelets(const ShapeletSet& set);
ShapeletSet read_shapelets(const std::filesystem::path& path);
void write_shapelets(const ShapeletSet& set, const std::filesystem::path& path);

/// CSV: the K x K confusion matrix (rows = reference), then
/// "class_acc,k,value" per class, "overall,value", "average,value",
/// "kappa,value". Reals carry six decimals; undefined class accuracies are
/// written as "nan".
std::string format_metrics(const MetricsReport& report);
void write_metrics(const MetricsReport& report, const std::filesystem::path& path);

/// Whole-file helpers used by the readers/writers above.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace shapedc
