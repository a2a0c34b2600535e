#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ssmrpe/cube.hpp"
#include "ssmrpe/wmf.hpp"

namespace ssmrpe {

/// Euclidean distance between raster coordinates, in pixels.
double scd(PixelCoord a, PixelCoord b);

double euclidean(std::span<const double> a, std::span<const double> b);

/// Mean distance from `query` to the window members (the heat-kernel width).
double heat_kernel_sigma(std::span<const double> query, std::span<const std::span<const double>> window);

/// Heat-kernel weighted mean of the distances from `query` to the window
/// members, with the kernel width taken from heat_kernel_sigma. Returns 0
/// when every member coincides with the query.
double window_distance(std::span<const double> query, std::span<const std::span<const double>> window);

/// Raw cube paired with its weighted-mean-filtered copy. Immutable.
class SscdContext {
 public:
  SscdContext(HyperCube raw, const FilterConfig& cfg);

  const HyperCube& raw() const noexcept { return raw_; }
  const HyperCube& filtered() const noexcept { return filtered_; }
  const FilterConfig& config() const noexcept { return cfg_; }
  std::size_t pixel_count() const noexcept { return raw_.pixel_count(); }

  /// Raw spectra of the clipped window around pixel i.
  std::vector<std::span<const double>> raw_window(std::size_t i) const;

 private:
  HyperCube raw_;
  HyperCube filtered_;
  FilterConfig cfg_;
};

/// Spatial-spectral combined distance from pixel i to pixel j: the window
/// distance of filtered pixel j against the raw window around i. Not
/// symmetric. Throws ConfigError when i == j.
double sscd(const SscdContext& ctx, std::size_t i, std::size_t j);

}  // namespace ssmrpe
