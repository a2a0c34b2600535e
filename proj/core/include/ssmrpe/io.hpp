#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssmrpe/cube.hpp"
#include "ssmrpe/embed.hpp"
#include "ssmrpe/eval.hpp"

namespace ssmrpe::io {

// Cube file, little-endian:
//   0  char[4] "HSX1"
//   4  u32     version (1)
//   8  u32     height
//  12  u32     width
//  16  u32     bands
//  20  f32     height*width*bands values, pixel-interleaved, row-major
inline constexpr std::size_t kCubeHeaderSize = 20;
inline constexpr std::uint32_t kCubeVersion = 1;

// Label file, little-endian:
//   0  char[4] "HSL1"
//   4  u32     height
//   8  u32     width
//  12  u32     classes
//  16  u16     height*width labels, row-major, 0 = unlabeled
inline constexpr std::size_t kLabelHeaderSize = 16;

std::vector<std::uint8_t> encode_cube(const HyperCube& cube);
/// Throws FormatError (with byte offset) on bad magic or version, zero or
/// overflowing dimensions, truncated or oversized payload, non-finite values.
HyperCube decode_cube(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_labels(const LabelRaster& labels);
HyperCube load_cube(const std::filesystem::path& path);
/// Values are stored as 32-bit floats; doubles are rounded on save.
void save_cube(const HyperCube& cube, const std::filesystem::path& path);

LabelRaster decode_labels(std::span<const std::uint8_t> bytes);
LabelRaster load_labels(const std::filesystem::path& path);
void save_labels(const LabelRaster& labels, const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

/// RFC 4180 field: quoted if it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view value);
/// Fixed two-decimal rendering used in metric tables.
std::string format_percent(double value);

/// Header `Class,Train,Test,Mean,Std`, one row per class, then OA, AA and
/// Kappa rows with `-` in the count columns. LF line endings.
std::string metrics_csv(const MetricsReport& report);
void export_metrics(const MetricsReport& report, const std::filesystem::path& path);

/// Header `w,k,OA_mean,OA_std,AA_mean,AA_std,Kappa_mean,Kappa_std`.
std::string sweep_csv(std::span<const SweepCell> cells);

/// Projection matrix rows (one per band) followed by an `eigenvalue` row.
std::string projection_csv(const EmbeddingModel& model);
/// One row per sample: `pixel,f1,...,fd`.
std::string features_csv(const FeatureMatrix& features, std::span<const std::size_t> pixels);

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 17 distinct colors; index 0 is black for unlabeled pixels.
std::span<const Rgb> default_palette();

/// Binary PPM (P6) image, one palette color per label. Throws ConfigError if
/// the palette has fewer than classes + 1 colors.
std::string encode_class_map(const LabelRaster& labels, std::span<const Rgb> palette);
void render_class_map(const LabelRaster& labels, std::span<const Rgb> palette, const std::filesystem::path& path);
/// Inverse of encode_class_map for a palette with distinct colors.
LabelRaster decode_class_map(std::span<const std::uint8_t> bytes, std::span<const Rgb> palette, std::size_t classes);

}  // namespace ssmrpe::io
