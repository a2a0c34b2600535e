#include "ssmrpe/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "ssmrpe/errors.hpp"

namespace ssmrpe::io {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  return static_cast<std::uint32_t>(bytes[at]) | static_cast<std::uint32_t>(bytes[at + 1]) << 8 |
         static_cast<std::uint32_t>(bytes[at + 2]) << 16 | static_cast<std::uint32_t>(bytes[at + 3]) << 24;
}

std::uint16_t get_u16(std::span<const std::uint8_t> bytes, std::size_t at) {
  return static_cast<std::uint16_t>(bytes[at] | bytes[at + 1] << 8);
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) throw ConfigError(std::string(what) + " does not fit in 32 bits");
  return static_cast<std::uint32_t>(v);
}

void expect_magic(std::span<const std::uint8_t> bytes, std::string_view magic, std::size_t header_size) {
  if (bytes.size() < header_size) throw FormatError("truncated header", bytes.size());
  if (std::memcmp(bytes.data(), magic.data(), 4) != 0) {
    throw FormatError("bad magic, expected \"" + std::string(magic) + "\"", 0);
  }
}

// Number of payload elements, or FormatError when the product overflows.
// `offset` is the position of the first u32 dimension field.
std::size_t element_count(std::initializer_list<std::uint32_t> dims, std::size_t element_size, std::size_t offset) {
  std::size_t count = 1;
  for (std::uint32_t d : dims) {
    if (d == 0) throw FormatError("zero dimension in header", offset);
    if (count > std::numeric_limits<std::size_t>::max() / element_size / d) {
      throw FormatError("dimensions overflow", offset);
    }
    count *= d;
    offset += 4;
  }
  return count;
}

void check_payload(std::size_t available, std::size_t expected, std::size_t header_size) {
  if (available < expected) throw FormatError("truncated payload", header_size + available);
  if (available > expected) throw FormatError("trailing bytes after payload", header_size + expected);
}

std::string to_string(const std::vector<std::uint8_t>& bytes) { return {bytes.begin(), bytes.end()}; }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::uint8_t> encode_cube(const HyperCube& cube) {
  std::vector<std::uint8_t> out;
  out.reserve(kCubeHeaderSize + 4 * cube.data().size());
  out.insert(out.end(), {'H', 'S', 'X', '1'});
  put_u32(out, kCubeVersion);
  put_u32(out, checked_u32(cube.height(), "height"));
  put_u32(out, checked_u32(cube.width(), "width"));
  put_u32(out, checked_u32(cube.bands(), "bands"));
  for (double v : cube.data()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

HyperCube decode_cube(std::span<const std::uint8_t> bytes) {
  expect_magic(bytes, "HSX1", kCubeHeaderSize);
  if (get_u32(bytes, 4) != kCubeVersion) throw FormatError("unsupported cube version " + std::to_string(get_u32(bytes, 4)), 4);
  const std::uint32_t h = get_u32(bytes, 8);
  const std::uint32_t w = get_u32(bytes, 12);
  const std::uint32_t d = get_u32(bytes, 16);
  const std::size_t count = element_count({h, w, d}, 4, 8);
  check_payload(bytes.size() - kCubeHeaderSize, count * 4, kCubeHeaderSize);

  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = kCubeHeaderSize + 4 * i;
    const float f = std::bit_cast<float>(get_u32(bytes, at));
    if (!std::isfinite(f)) throw FormatError("non-finite value", at);
    values[i] = f;
  }
  return {h, w, d, std::move(values)};
}

std::vector<std::uint8_t> encode_labels(const LabelRaster& labels) {
  std::vector<std::uint8_t> out;
  out.reserve(kLabelHeaderSize + 2 * labels.pixel_count());
  out.insert(out.end(), {'H', 'S', 'L', '1'});
  put_u32(out, checked_u32(labels.height(), "height"));
  put_u32(out, checked_u32(labels.width(), "width"));
  put_u32(out, checked_u32(labels.classes(), "classes"));
  for (std::uint16_t l : labels.labels()) put_u16(out, l);
  return out;
}

LabelRaster decode_labels(std::span<const std::uint8_t> bytes) {
  expect_magic(bytes, "HSL1", kLabelHeaderSize);
  const std::uint32_t h = get_u32(bytes, 4);
  const std::uint32_t w = get_u32(bytes, 8);
  const std::uint32_t c = get_u32(bytes, 12);
  if (c == 0) throw FormatError("class count must be positive", 12);
  const std::size_t count = element_count({h, w}, 2, 4);
  check_payload(bytes.size() - kLabelHeaderSize, count * 2, kLabelHeaderSize);

  std::vector<std::uint16_t> labels(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = kLabelHeaderSize + 2 * i;
    labels[i] = get_u16(bytes, at);
    if (labels[i] > c) {
      throw FormatError("label " + std::to_string(labels[i]) + " exceeds class count " + std::to_string(c), at);
    }
  }
  return {h, w, c, std::move(labels)};
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

HyperCube load_cube(const std::filesystem::path& path) { return decode_cube(read_file(path)); }

void save_cube(const HyperCube& cube, const std::filesystem::path& path) {
  write_file_atomic(path, to_string(encode_cube(cube)));
}

LabelRaster load_labels(const std::filesystem::path& path) { return decode_labels(read_file(path)); }

void save_labels(const LabelRaster& labels, const std::filesystem::path& path) {
  write_file_atomic(path, to_string(encode_labels(labels)));
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char ch : value) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string format_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

std::string metrics_csv(const MetricsReport& report) {
  std::ostringstream out;
  out << "Class,Train,Test,Mean,Std\n";
  for (const auto& row : report.classes) {
    out << row.class_id << ',' << row.train << ',' << row.test << ',' << format_percent(row.accuracy.mean) << ','
        << format_percent(row.accuracy.std) << '\n';
  }
  const std::pair<const char*, const Stat*> summary[] = {{"OA", &report.oa}, {"AA", &report.aa}, {"Kappa", &report.kappa}};
  for (const auto& [name, stat] : summary) {
    out << csv_field(name) << ",-,-," << format_percent(stat->mean) << ',' << format_percent(stat->std) << '\n';
  }
  return out.str();
}

void export_metrics(const MetricsReport& report, const std::filesystem::path& path) {
  write_file_atomic(path, metrics_csv(report));
}

std::string sweep_csv(std::span<const SweepCell> cells) {
  std::ostringstream out;
  out << "w,k,OA_mean,OA_std,AA_mean,AA_std,Kappa_mean,Kappa_std\n";
  for (const auto& cell : cells) {
    const auto& r = cell.report;
    out << cell.w << ',' << cell.k << ',' << format_percent(r.oa.mean) << ',' << format_percent(r.oa.std) << ','
        << format_percent(r.aa.mean) << ',' << format_percent(r.aa.std) << ',' << format_percent(r.kappa.mean) << ','
        << format_percent(r.kappa.std) << '\n';
  }
  return out.str();
}

std::string projection_csv(const EmbeddingModel& model) {
  std::ostringstream out;
  out << "row";
  for (Eigen::Index c = 0; c < model.projection.cols(); ++c) out << ",a" << c + 1;
  out << '\n';
  for (Eigen::Index r = 0; r < model.projection.rows(); ++r) {
    out << "band" << r + 1;
    for (Eigen::Index c = 0; c < model.projection.cols(); ++c) out << ',' << format_double(model.projection(r, c));
    out << '\n';
  }
  out << "eigenvalue";
  for (Eigen::Index c = 0; c < model.eigenvalues.size(); ++c) out << ',' << format_double(model.eigenvalues[c]);
  out << '\n';
  return out.str();
}

std::string features_csv(const FeatureMatrix& features, std::span<const std::size_t> pixels) {
  if (pixels.size() != features.count()) throw ShapeError("pixel list does not match feature count");
  std::ostringstream out;
  out << "pixel";
  for (std::size_t f = 0; f < features.dim(); ++f) out << ",f" << f + 1;
  out << '\n';
  for (std::size_t s = 0; s < features.count(); ++s) {
    out << pixels[s];
    for (std::size_t f = 0; f < features.dim(); ++f) {
      out << ',' << format_double(features.values(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(s)));
    }
    out << '\n';
  }
  return out.str();
}

std::span<const Rgb> default_palette() {
  static constexpr std::array<Rgb, 17> kPalette{{
      {0, 0, 0},       {255, 0, 0},     {0, 255, 0},     {0, 0, 255},     {255, 255, 0},   {0, 255, 255},
      {255, 0, 255},   {192, 192, 192}, {128, 128, 128}, {128, 0, 0},     {128, 128, 0},   {0, 128, 0},
      {128, 0, 128},   {0, 128, 128},   {0, 0, 128},     {255, 165, 0},   {139, 69, 19},
  }};
  return kPalette;
}

std::string encode_class_map(const LabelRaster& labels, std::span<const Rgb> palette) {
  if (palette.size() < labels.classes() + 1) {
    throw ConfigError("palette has " + std::to_string(palette.size()) + " colors, need " +
                      std::to_string(labels.classes() + 1));
  }
  std::string out = "P6\n" + std::to_string(labels.width()) + " " + std::to_string(labels.height()) + "\n255\n";
  out.reserve(out.size() + 3 * labels.pixel_count());
  for (std::uint16_t l : labels.labels()) {
    const Rgb& c = palette[l];
    out.push_back(static_cast<char>(c.r));
    out.push_back(static_cast<char>(c.g));
    out.push_back(static_cast<char>(c.b));
  }
  return out;
}

void render_class_map(const LabelRaster& labels, std::span<const Rgb> palette, const std::filesystem::path& path) {
  write_file_atomic(path, encode_class_map(labels, palette));
}

LabelRaster decode_class_map(std::span<const std::uint8_t> bytes, std::span<const Rgb> palette, std::size_t classes) {
  const std::string text(bytes.begin(), bytes.end());
  std::istringstream header(text);
  std::string magic;
  std::size_t width = 0;
  std::size_t height = 0;
  int maxval = 0;
  header >> magic >> width >> height >> maxval;
  if (!header || magic != "P6" || maxval != 255) throw FormatError("not an 8-bit binary PPM", 0);
  const auto start = static_cast<std::size_t>(header.tellg()) + 1;
  if (width == 0 || height == 0) throw FormatError("zero image dimension", 0);
  check_payload(bytes.size() - std::min(bytes.size(), start), 3 * width * height, start);

  std::vector<std::uint16_t> labels(width * height);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Rgb px{bytes[start + 3 * i], bytes[start + 3 * i + 1], bytes[start + 3 * i + 2]};
    std::size_t id = 0;
    while (id <= classes && id < palette.size() && !(palette[id] == px)) ++id;
    if (id > classes || id >= palette.size()) throw FormatError("pixel color not in palette", start + 3 * i);
    labels[i] = static_cast<std::uint16_t>(id);
  }
  return {height, width, classes, std::move(labels)};
}

}  // namespace ssmrpe::io
