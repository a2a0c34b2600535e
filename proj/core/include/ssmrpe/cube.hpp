#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ssmrpe {

struct PixelCoord {
  std::size_t p = 0;  // row
  std::size_t q = 0;  // column

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

std::size_t flat_index(PixelCoord coord, std::size_t height, std::size_t width);
PixelCoord coord_of(std::size_t index, std::size_t height, std::size_t width);

/// H x W raster of D-band spectra, stored band-interleaved-by-pixel in
/// row-major pixel order. Pixel i = p * W + q occupies data[i*D, (i+1)*D).
class HyperCube {
 public:
  HyperCube() = default;
  /// Zero-filled cube. Throws ConfigError on a zero dimension.
  HyperCube(std::size_t height, std::size_t width, std::size_t bands);
  /// Throws ShapeError if values.size() != H*W*D and ConfigError if any
  /// value is non-finite.
  HyperCube(std::size_t height, std::size_t width, std::size_t bands, std::vector<double> values);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t bands() const noexcept { return bands_; }
  std::size_t pixel_count() const noexcept { return height_ * width_; }

  std::span<const double> pixel(std::size_t index) const;
  std::span<const double> pixel(PixelCoord coord) const { return pixel(flat_index(coord)); }
  std::span<double> mutable_pixel(std::size_t index);

  std::size_t flat_index(PixelCoord coord) const { return ssmrpe::flat_index(coord, height_, width_); }
  PixelCoord coord_of(std::size_t index) const { return ssmrpe::coord_of(index, height_, width_); }

  const std::vector<double>& data() const noexcept { return data_; }

  /// D x n column view; column i is pixel i.
  Eigen::Map<const Eigen::MatrixXd> spectra() const;
  /// D x |indices| copy of the selected pixels.
  Eigen::MatrixXd gather(std::span<const std::size_t> indices) const;

  friend bool operator==(const HyperCube&, const HyperCube&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t bands_ = 0;
  std::vector<double> data_;
};

struct WindowMember {
  PixelCoord coord;
  std::size_t index;
  std::span<const double> spectrum;
};

/// Clipped square window of side w around center, row-major order, center
/// included. Throws ConfigError for even or zero w, BoundsError for an
/// out-of-raster center.
std::vector<WindowMember> window_of(const HyperCube& cube, PixelCoord center, std::size_t w);

/// Per-pixel class ids; 0 marks unlabeled, 1..classes are classes.
class LabelRaster {
 public:
  LabelRaster() = default;
  LabelRaster(std::size_t height, std::size_t width, std::size_t classes, std::vector<std::uint16_t> labels);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t classes() const noexcept { return classes_; }
  std::size_t pixel_count() const noexcept { return labels_.size(); }
  std::uint16_t at(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::uint16_t>& labels() const noexcept { return labels_; }

  friend bool operator==(const LabelRaster&, const LabelRaster&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t classes_ = 0;
  std::vector<std::uint16_t> labels_;
};

/// d x n embedded features, one column per sample.
struct FeatureMatrix {
  Eigen::MatrixXd values;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(values.rows()); }
  std::size_t count() const noexcept { return static_cast<std::size_t>(values.cols()); }
};

}  // namespace ssmrpe
