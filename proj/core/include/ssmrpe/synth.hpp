#pragma once

#include <cstdint>
#include <utility>

#include "ssmrpe/cube.hpp"

namespace ssmrpe {

/// Synthetic benchmark scene: a square raster split into four contiguous
/// quadrant blocks (classes 1..4, all pixels labeled). Each class has a
/// Gaussian-bump mean spectrum; every pixel adds i.i.d. Gaussian noise.
/// Values are rounded to float so the cube survives a file round trip.
struct SynthOptions {
  std::size_t size = 32;      // raster is size x size, even
  std::size_t bands = 20;
  double noise_sigma = 0.35;  // per-band additive noise std
  std::uint64_t seed = 0;
};

/// Mean spectrum of class c in [1, 4].
std::vector<double> synth_signature(std::size_t class_id, std::size_t bands);

std::pair<HyperCube, LabelRaster> generate_synthetic(const SynthOptions& options);

}  // namespace ssmrpe
