#include "ssmrpe/wmf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ssmrpe/errors.hpp"
#include "ssmrpe/parallel.hpp"

namespace ssmrpe {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

void filter_into(const HyperCube& cube, PixelCoord center, const FilterConfig& cfg, std::span<double> out) {
  const auto window = window_of(cube, center, cfg.w);
  const auto x = cube.pixel(center);
  // Accumulate weighted offsets from the center so equal spectra come back exactly.
  std::fill(out.begin(), out.end(), 0.0);
  double weight_sum = 1.0;
  for (const auto& member : window) {
    if (member.coord == center) continue;
    const double v = std::exp(-cfg.gamma0 * squared_distance(x, member.spectrum));
    weight_sum += v;
    for (std::size_t b = 0; b < out.size(); ++b) out[b] += v * (member.spectrum[b] - x[b]);
  }
  for (std::size_t b = 0; b < out.size(); ++b) out[b] = x[b] + out[b] / weight_sum;
}

}  // namespace

void FilterConfig::validate() const {
  if (w == 0 || w % 2 == 0) throw ConfigError("window size must be a positive odd number, got " + std::to_string(w));
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) throw ConfigError("gamma0 must be positive and finite");
}

double wmf_weight(std::span<const double> center, std::span<const double> neighbor, double gamma0) {
  if (center.size() != neighbor.size()) {
    throw ShapeError("spectra differ in length: " + std::to_string(center.size()) + " vs " +
                     std::to_string(neighbor.size()));
  }
  return std::exp(-gamma0 * squared_distance(center, neighbor));
}

std::vector<double> filter_pixel(const HyperCube& cube, PixelCoord center, const FilterConfig& cfg) {
  cfg.validate();
  std::vector<double> out(cube.bands());
  filter_into(cube, center, cfg, out);
  return out;
}

HyperCube filter_cube(const HyperCube& cube, const FilterConfig& cfg) {
  cfg.validate();
  if (cfg.w == 1) return cube;
  HyperCube out(cube.height(), cube.width(), cube.bands());
  parallel_for(cube.pixel_count(), [&](std::size_t i) {
    filter_into(cube, cube.coord_of(i), cfg, out.mutable_pixel(i));
  });
  return out;
}

}  // namespace ssmrpe
