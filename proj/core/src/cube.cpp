#include "ssmrpe/cube.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ssmrpe/errors.hpp"

namespace ssmrpe {

std::size_t flat_index(PixelCoord coord, std::size_t height, std::size_t width) {
  if (coord.p >= height || coord.q >= width) {
    throw BoundsError("pixel (" + std::to_string(coord.p) + ", " + std::to_string(coord.q) +
                      ") outside " + std::to_string(height) + "x" + std::to_string(width) + " raster");
  }
  return coord.p * width + coord.q;
}

PixelCoord coord_of(std::size_t index, std::size_t height, std::size_t width) {
  if (width == 0 || index >= height * width) {
    throw BoundsError("flat index " + std::to_string(index) + " outside " + std::to_string(height) + "x" +
                      std::to_string(width) + " raster");
  }
  return {index / width, index % width};
}

HyperCube::HyperCube(std::size_t height, std::size_t width, std::size_t bands)
    : height_(height), width_(width), bands_(bands) {
  if (height == 0 || width == 0 || bands == 0) throw ConfigError("cube dimensions must be positive");
  data_.assign(height * width * bands, 0.0);
}

HyperCube::HyperCube(std::size_t height, std::size_t width, std::size_t bands, std::vector<double> values)
    : height_(height), width_(width), bands_(bands), data_(std::move(values)) {
  if (height == 0 || width == 0 || bands == 0) throw ConfigError("cube dimensions must be positive");
  if (data_.size() != height * width * bands) {
    throw ShapeError("cube holds " + std::to_string(data_.size()) + " values, expected " +
                     std::to_string(height * width * bands));
  }
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); })) {
    throw ConfigError("cube contains non-finite values");
  }
}

std::span<const double> HyperCube::pixel(std::size_t index) const {
  if (index >= pixel_count()) throw BoundsError("pixel index " + std::to_string(index) + " out of range");
  return {data_.data() + index * bands_, bands_};
}

std::span<double> HyperCube::mutable_pixel(std::size_t index) {
  if (index >= pixel_count()) throw BoundsError("pixel index " + std::to_string(index) + " out of range");
  return {data_.data() + index * bands_, bands_};
}

Eigen::Map<const Eigen::MatrixXd> HyperCube::spectra() const {
  return {data_.data(), static_cast<Eigen::Index>(bands_), static_cast<Eigen::Index>(pixel_count())};
}

Eigen::MatrixXd HyperCube::gather(std::span<const std::size_t> indices) const {
  Eigen::MatrixXd out(bands_, indices.size());
  for (std::size_t c = 0; c < indices.size(); ++c) {
    auto px = pixel(indices[c]);
    std::copy(px.begin(), px.end(), out.col(static_cast<Eigen::Index>(c)).data());
  }
  return out;
}

std::vector<WindowMember> window_of(const HyperCube& cube, PixelCoord center, std::size_t w) {
  if (w == 0 || w % 2 == 0) throw ConfigError("window size must be a positive odd number, got " + std::to_string(w));
  cube.flat_index(center);  // bounds check
  const std::size_t t = (w - 1) / 2;
  const std::size_t p_lo = center.p >= t ? center.p - t : 0;
  const std::size_t q_lo = center.q >= t ? center.q - t : 0;
  const std::size_t p_hi = std::min(center.p + t, cube.height() - 1);
  const std::size_t q_hi = std::min(center.q + t, cube.width() - 1);

  std::vector<WindowMember> members;
  members.reserve((p_hi - p_lo + 1) * (q_hi - q_lo + 1));
  for (std::size_t p = p_lo; p <= p_hi; ++p) {
    for (std::size_t q = q_lo; q <= q_hi; ++q) {
      const std::size_t idx = p * cube.width() + q;
      members.push_back({{p, q}, idx, cube.pixel(idx)});
    }
  }
  return members;
}

LabelRaster::LabelRaster(std::size_t height, std::size_t width, std::size_t classes,
                         std::vector<std::uint16_t> labels)
    : height_(height), width_(width), classes_(classes), labels_(std::move(labels)) {
  if (height == 0 || width == 0) throw ConfigError("label raster dimensions must be positive");
  if (classes == 0) throw ConfigError("label raster needs at least one class");
  if (labels_.size() != height * width) {
    throw ShapeError("label raster holds " + std::to_string(labels_.size()) + " labels, expected " +
                     std::to_string(height * width));
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] > classes) {
      throw ConfigError("label " + std::to_string(labels_[i]) + " at pixel " + std::to_string(i) +
                        " exceeds class count " + std::to_string(classes));
    }
  }
}

}  // namespace ssmrpe
