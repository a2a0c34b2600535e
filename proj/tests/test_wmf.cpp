#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ssmrpe/errors.hpp"
#include "ssmrpe/parallel.hpp"
#include "ssmrpe/wmf.hpp"

namespace ssmrpe {
namespace {

TEST(WmfWeight, Examples) {
  const std::vector<double> a{1.0, 2.0, 3.0};
  EXPECT_EQ(wmf_weight(a, a, 0.2), 1.0);
  const std::vector<double> b{1.0, 0.0, 0.0};
  const std::vector<double> c{0.0, 2.0, 0.0};  // |b - c|^2 = 5
  EXPECT_NEAR(wmf_weight(b, c, 0.2), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(wmf_weight(b, c, 0.2), 0.367879, 1e-6);
  const std::vector<double> short_vec{1.0};
  EXPECT_THROW(wmf_weight(a, short_vec, 0.2), ShapeError);
}

TEST(WmfWeight, MatchesScalarLoop) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(8), b(8);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    const double expected = std::exp(-0.2 * oracle::sq_dist(a, b));
    EXPECT_NEAR(wmf_weight(a, b, 0.2), expected, 1e-12);
  }
}

TEST(FilterConfig, Validation) {
  EXPECT_THROW((FilterConfig{2, 0.2}.validate()), ConfigError);
  EXPECT_THROW((FilterConfig{0, 0.2}.validate()), ConfigError);
  EXPECT_THROW((FilterConfig{3, 0.0}.validate()), ConfigError);
  EXPECT_NO_THROW((FilterConfig{3, 0.2}.validate()));
  EXPECT_EQ((FilterConfig{7, 0.2}.half_width()), 3u);
}

TEST(FilterPixel, UnitWindowIsIdentity) {
  std::mt19937_64 rng(4);
  const HyperCube cube = oracle::random_cube(4, 4, 3, rng);
  const auto out = filter_pixel(cube, {1, 2}, {1, 0.2});
  const auto in = cube.pixel(PixelCoord{1, 2});
  for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(out[b], in[b]);
}

TEST(FilterPixel, ConstantWindow) {
  const HyperCube cube(5, 5, 3, std::vector<double>(75, 0.7));
  const auto out = filter_pixel(cube, {2, 2}, {5, 0.2});
  for (double v : out) EXPECT_NEAR(v, 0.7, 1e-15);
}

TEST(FilterPixel, MatchesDirectFormula) {
  std::mt19937_64 rng(5);
  const HyperCube cube = oracle::random_cube(6, 6, 5, rng);
  for (std::size_t i = 0; i < cube.pixel_count(); ++i) {
    const PixelCoord c = cube.coord_of(i);
    const auto got = filter_pixel(cube, c, {3, 0.2});
    const auto expected = oracle::filtered_pixel(cube, static_cast<long>(c.p), static_cast<long>(c.q), 3, 0.2);
    for (std::size_t b = 0; b < got.size(); ++b) EXPECT_NEAR(got[b], expected[b], 1e-10 * std::abs(expected[b]));
  }
}

TEST(FilterCube, UnitWindowBitIdentical) {
  std::mt19937_64 rng(6);
  const HyperCube cube = oracle::random_cube(5, 7, 4, rng);
  EXPECT_EQ(filter_cube(cube, {1, 0.2}), cube);
}

TEST(FilterCube, EqualsPerPixelFilter) {
  std::mt19937_64 rng(7);
  const HyperCube cube = oracle::random_cube(6, 6, 4, rng);
  const HyperCube out = filter_cube(cube, {3, 0.2});
  for (std::size_t i = 0; i < cube.pixel_count(); ++i) {
    const auto expected = filter_pixel(cube, cube.coord_of(i), {3, 0.2});
    const auto got = out.pixel(i);
    for (std::size_t b = 0; b < 4; ++b) EXPECT_EQ(got[b], expected[b]);
  }
}

TEST(FilterCube, ConvexityAndContraction) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const HyperCube cube = oracle::random_cube(7, 6, 3, rng, -2.0, 2.0);
    const FilterConfig cfg{5, 0.2};
    const HyperCube out = filter_cube(cube, cfg);
    for (std::size_t i = 0; i < cube.pixel_count(); ++i) {
      const auto win = window_of(cube, cube.coord_of(i), cfg.w);
      std::vector<double> mean(3, 0.0);
      for (const auto& m : win) {
        for (std::size_t b = 0; b < 3; ++b) mean[b] += m.spectrum[b] / static_cast<double>(win.size());
      }
      double max_member = 0.0;
      for (std::size_t b = 0; b < 3; ++b) {
        double lo = 1e300, hi = -1e300;
        for (const auto& m : win) {
          lo = std::min(lo, m.spectrum[b]);
          hi = std::max(hi, m.spectrum[b]);
        }
        EXPECT_GE(out.pixel(i)[b], lo);
        EXPECT_LE(out.pixel(i)[b], hi);
      }
      for (const auto& m : win) {
        max_member = std::max(max_member, oracle::sq_dist({m.spectrum.begin(), m.spectrum.end()}, mean));
      }
      const auto f = out.pixel(i);
      EXPECT_LE(oracle::sq_dist({f.begin(), f.end()}, mean), max_member + 1e-12);
    }
  }
}

TEST(FilterCube, DeterministicAcrossWorkerCounts) {
  std::mt19937_64 rng(9);
  const HyperCube cube = oracle::random_cube(13, 11, 6, rng);
  set_worker_count(1);
  const HyperCube one = filter_cube(cube, {5, 0.2});
  set_worker_count(7);
  const HyperCube many = filter_cube(cube, {5, 0.2});
  set_worker_count(std::nullopt);
  EXPECT_EQ(one, many);
}

}  // namespace
}  // namespace ssmrpe
