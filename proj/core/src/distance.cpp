#include "ssmrpe/distance.hpp"

#include <cmath>
#include <string>

#include "ssmrpe/errors.hpp"

namespace ssmrpe {

double scd(PixelCoord a, PixelCoord b) {
  const double dp = static_cast<double>(a.p) - static_cast<double>(b.p);
  const double dq = static_cast<double>(a.q) - static_cast<double>(b.q);
  return std::sqrt(dp * dp + dq * dq);
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeError("spectra differ in length: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

double heat_kernel_sigma(std::span<const double> query, std::span<const std::span<const double>> window) {
  if (window.empty()) throw ConfigError("heat kernel width needs a nonempty window");
  double acc = 0.0;
  for (const auto& member : window) acc += euclidean(query, member);
  return acc / static_cast<double>(window.size());
}

double window_distance(std::span<const double> query, std::span<const std::span<const double>> window) {
  if (window.empty()) throw ConfigError("window distance needs a nonempty window");
  if (window.size() == 1) return euclidean(query, window.front());

  std::vector<double> dist(window.size());
  double sigma = 0.0;
  for (std::size_t s = 0; s < window.size(); ++s) {
    dist[s] = euclidean(query, window[s]);
    sigma += dist[s];
  }
  sigma /= static_cast<double>(window.size());
  // Every member coincides with the query: the kernel is undefined but all
  // distances are zero.
  if (sigma == 0.0) return 0.0;

  const double inv_sigma2 = 1.0 / (sigma * sigma);
  double num = 0.0;
  double den = 0.0;
  for (double d : dist) {
    const double v = std::exp(-d * d * inv_sigma2);
    num += v * d;
    den += v;
  }
  return num / den;
}

SscdContext::SscdContext(HyperCube raw, const FilterConfig& cfg)
    : raw_(std::move(raw)), filtered_(filter_cube(raw_, cfg)), cfg_(cfg) {}

std::vector<std::span<const double>> SscdContext::raw_window(std::size_t i) const {
  const auto members = window_of(raw_, raw_.coord_of(i), cfg_.w);
  std::vector<std::span<const double>> spectra;
  spectra.reserve(members.size());
  for (const auto& m : members) spectra.push_back(m.spectrum);
  return spectra;
}

double sscd(const SscdContext& ctx, std::size_t i, std::size_t j) {
  if (i == j) throw ConfigError("self distance requested for pixel " + std::to_string(i));
  const auto window = ctx.raw_window(i);
  return window_distance(ctx.filtered().pixel(j), window);
}

}  // namespace ssmrpe
