#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ssmrpe/distance.hpp"
#include "ssmrpe/errors.hpp"

namespace ssmrpe {
namespace {

using Window = std::vector<std::span<const double>>;

Window as_window(const std::vector<std::vector<double>>& members) {
  Window w;
  for (const auto& m : members) w.emplace_back(m);
  return w;
}

TEST(Scd, Examples) {
  EXPECT_EQ(scd({3, 7}, {3, 7}), 0.0);
  EXPECT_EQ(scd({0, 0}, {3, 4}), 5.0);
  EXPECT_NEAR(scd({1, 1}, {2, 2}), 1.414214, 1e-6);
}

TEST(Scd, SymmetryAndTriangle) {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<std::size_t> u(0, 50);
  for (int i = 0; i < 500; ++i) {
    const PixelCoord a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    EXPECT_EQ(scd(a, b), scd(b, a));
    EXPECT_LE(scd(a, c), scd(a, b) + scd(b, c) + 1e-12);
    EXPECT_EQ(scd(a, b) == 0.0, a == b);
  }
}

TEST(HeatKernelSigma, Examples) {
  const std::vector<std::vector<double>> single{{1.0, 2.0}};
  const std::vector<double> q{1.0, 2.0};
  EXPECT_EQ(heat_kernel_sigma(q, as_window(single)), 0.0);

  const std::vector<double> origin{0.0, 0.0};
  const std::vector<std::vector<double>> ring{{2.0, 0.0}, {0.0, 2.0}, {-2.0, 0.0}};
  EXPECT_NEAR(heat_kernel_sigma(origin, as_window(ring)), 2.0, 1e-15);
  EXPECT_THROW(heat_kernel_sigma(origin, Window{}), ConfigError);
}

TEST(HeatKernelSigma, MatchesScalarLoop) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<std::vector<double>> members(9, std::vector<double>(6));
  std::vector<double> q(6);
  for (auto& m : members) for (auto& v : m) v = n(rng);
  for (auto& v : q) v = n(rng);
  double expected = 0.0;
  for (const auto& m : members) expected += std::sqrt(oracle::sq_dist(q, m)) / 9.0;
  EXPECT_NEAR(heat_kernel_sigma(q, as_window(members)), expected, 1e-12);
}

TEST(WindowDistance, Examples) {
  const std::vector<double> origin{0.0, 0.0};
  const std::vector<std::vector<double>> single{{3.0, 4.0}};
  EXPECT_NEAR(window_distance(origin, as_window(single)), 5.0, 1e-15);
  const std::vector<std::vector<double>> ring{{1.5, 0.0}, {0.0, -1.5}, {-1.5, 0.0}, {0.0, 1.5}};
  EXPECT_NEAR(window_distance(origin, as_window(ring)), 1.5, 1e-15);
  // Every member coincides with the query.
  const std::vector<std::vector<double>> same{{0.0, 0.0}, {0.0, 0.0}};
  EXPECT_EQ(window_distance(origin, as_window(same)), 0.0);
  EXPECT_THROW(window_distance(origin, Window{}), ConfigError);
}

TEST(WindowDistance, MatchesDirectFormulaAndStaysInRange) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> members(1 + trial % 12, std::vector<double>(5));
    std::vector<double> q(5);
    for (auto& m : members) for (auto& v : m) v = n(rng);
    for (auto& v : q) v = n(rng);
    const double got = window_distance(q, as_window(members));
    const double expected = oracle::window_distance(q, members);
    EXPECT_NEAR(got, expected, 1e-10 * expected);
    double lo = 1e300, hi = 0.0;
    for (const auto& m : members) {
      lo = std::min(lo, std::sqrt(oracle::sq_dist(q, m)));
      hi = std::max(hi, std::sqrt(oracle::sq_dist(q, m)));
    }
    EXPECT_GE(got, lo - 1e-12);
    EXPECT_LE(got, hi + 1e-12);
  }
}

TEST(WindowDistance, ScalesLinearly) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<std::vector<double>> members(9, std::vector<double>(4));
  std::vector<double> q(4);
  for (auto& m : members) for (auto& v : m) v = n(rng);
  for (auto& v : q) v = n(rng);
  const double base = window_distance(q, as_window(members));
  for (double alpha : {0.25, 3.0, 17.0}) {
    auto scaled = members;
    for (auto& m : scaled) for (auto& v : m) v *= alpha;
    auto sq = q;
    for (auto& v : sq) v *= alpha;
    EXPECT_NEAR(window_distance(sq, as_window(scaled)), alpha * base, 1e-12 * alpha * base);
  }
}

TEST(Sscd, UnitWindowIsRawToFilteredDistance) {
  std::mt19937_64 rng(14);
  const SscdContext ctx(oracle::random_cube(4, 5, 3, rng), {1, 0.2});
  for (std::size_t i = 0; i < ctx.pixel_count(); ++i) {
    for (std::size_t j = 0; j < ctx.pixel_count(); ++j) {
      if (i == j) continue;
      const auto xi = ctx.raw().pixel(i);
      const auto xj = ctx.filtered().pixel(j);
      EXPECT_NEAR(sscd(ctx, i, j), euclidean(xi, xj), 1e-15);
    }
  }
}

TEST(Sscd, ConstantCubeIsZero) {
  const SscdContext ctx(HyperCube(4, 4, 3, std::vector<double>(48, 0.4)), {3, 0.2});
  for (std::size_t j = 1; j < 16; ++j) EXPECT_EQ(sscd(ctx, 0, j), 0.0);
}

TEST(Sscd, MatchesCompositionOracleAndIsAsymmetric) {
  std::mt19937_64 rng(15);
  const HyperCube raw = oracle::random_cube(8, 8, 6, rng);
  const SscdContext ctx(raw, {3, 0.2});
  bool asymmetric = false;
  for (auto [i, j] : {std::pair<std::size_t, std::size_t>{0, 9}, {9, 0}, {27, 36}, {63, 7}, {12, 50}}) {
    const PixelCoord ci = raw.coord_of(i);
    const PixelCoord cj = raw.coord_of(j);
    const auto query = oracle::filtered_pixel(raw, static_cast<long>(cj.p), static_cast<long>(cj.q), 3, 0.2);
    const auto window = oracle::window_spectra(raw, static_cast<long>(ci.p), static_cast<long>(ci.q), 3);
    const double expected = oracle::window_distance(query, window);
    EXPECT_NEAR(sscd(ctx, i, j), expected, 1e-10 * expected);
    asymmetric = asymmetric || std::abs(sscd(ctx, i, j) - sscd(ctx, j, i)) > 1e-9;
  }
  EXPECT_TRUE(asymmetric);
  EXPECT_THROW(sscd(ctx, 3, 3), ConfigError);
}

}  // namespace
}  // namespace ssmrpe
