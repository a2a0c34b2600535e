#include "ssmrpe/synth.hpp"

#include <cmath>
#include <string>

#include "ssmrpe/errors.hpp"
#include "ssmrpe/eval.hpp"

namespace ssmrpe {

std::vector<double> synth_signature(std::size_t class_id, std::size_t bands) {
  if (class_id < 1 || class_id > 4) throw ConfigError("synthetic class id must lie in [1, 4]");
  // Bumps centered at 1/5, 2/5, 3/5, 4/5 of the band range.
  const double center = static_cast<double>(class_id) * static_cast<double>(bands) / 5.0;
  const double width = static_cast<double>(bands) / 8.0;
  std::vector<double> s(bands);
  for (std::size_t b = 0; b < bands; ++b) {
    const double x = (static_cast<double>(b) - center) / width;
    s[b] = 0.2 + 0.6 * std::exp(-0.5 * x * x);
  }
  return s;
}

std::pair<HyperCube, LabelRaster> generate_synthetic(const SynthOptions& options) {
  if (options.size < 2 || options.size % 2 != 0) throw ConfigError("synthetic raster size must be even and >= 2");
  if (options.bands == 0) throw ConfigError("synthetic cube needs at least one band");
  if (!(options.noise_sigma >= 0.0)) throw ConfigError("noise sigma must be nonnegative");

  const std::size_t n = options.size;
  const std::size_t half = n / 2;
  std::vector<std::vector<double>> signatures;
  for (std::size_t c = 1; c <= 4; ++c) signatures.push_back(synth_signature(c, options.bands));

  SplitRng rng(options.seed);
  std::vector<double> values;
  values.reserve(n * n * options.bands);
  std::vector<std::uint16_t> labels;
  labels.reserve(n * n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      const std::size_t c = 1 + (p >= half ? 2 : 0) + (q >= half ? 1 : 0);
      labels.push_back(static_cast<std::uint16_t>(c));
      for (double mean : signatures[c - 1]) values.push_back(static_cast<float>(mean + options.noise_sigma * rng.normal()));
    }
  }
  return {HyperCube(n, n, options.bands, std::move(values)), LabelRaster(n, n, 4, std::move(labels))};
}

}  // namespace ssmrpe
