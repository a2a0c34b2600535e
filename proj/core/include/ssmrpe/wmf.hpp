#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ssmrpe/cube.hpp"

namespace ssmrpe {

/// Weighted mean filter parameters: odd window side `w` and the kernel
/// constant `gamma0` applied to squared spectral distances.
struct FilterConfig {
  std::size_t w = 1;
  double gamma0 = 0.2;

  std::size_t half_width() const noexcept { return (w - 1) / 2; }
  /// Throws ConfigError unless w is odd and >= 1 and gamma0 > 0.
  void validate() const;
};

/// exp(-gamma0 * |center - neighbor|^2).
double wmf_weight(std::span<const double> center, std::span<const double> neighbor, double gamma0);

/// Kernel-weighted mean over the clipped window around `center`; the center
/// itself carries weight 1.
std::vector<double> filter_pixel(const HyperCube& cube, PixelCoord center, const FilterConfig& cfg);

/// Applies filter_pixel to every pixel. Parallel over pixels.
HyperCube filter_cube(const HyperCube& cube, const FilterConfig& cfg);

}  // namespace ssmrpe
