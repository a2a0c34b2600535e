#include <benchmark/benchmark.h>

#include <numeric>

#include "ssmrpe/embed.hpp"
#include "ssmrpe/graph.hpp"
#include "ssmrpe/synth.hpp"
#include "ssmrpe/wmf.hpp"

namespace {

using namespace ssmrpe;

HyperCube scene(std::size_t size, std::size_t bands) {
  SynthOptions opts;
  opts.size = size;
  opts.bands = bands;
  return generate_synthetic(opts).first;
}

void BM_FilterCube(benchmark::State& state) {
  const HyperCube cube = scene(64, 50);
  const FilterConfig cfg{static_cast<std::size_t>(state.range(0)), 0.2};
  for (auto _ : state) benchmark::DoNotOptimize(filter_cube(cube, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cube.pixel_count()));
}
BENCHMARK(BM_FilterCube)->Arg(3)->Arg(7)->Arg(13)->Unit(benchmark::kMillisecond);

void BM_KnnSscd(benchmark::State& state) {
  const SscdContext ctx(scene(32, 30), {static_cast<std::size_t>(state.range(0)), 0.2});
  std::vector<std::size_t> nodes(200);
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = i * 5;
  for (auto _ : state) benchmark::DoNotOptimize(knn_sscd(ctx, nodes, 20));
}
BENCHMARK(BM_KnnSscd)->Arg(5)->Arg(13)->Unit(benchmark::kMillisecond);

void BM_WeightMatrix(benchmark::State& state) {
  const SscdContext ctx(scene(32, 30), {5, 0.2});
  std::vector<std::size_t> nodes(400);
  std::iota(nodes.begin(), nodes.end(), 0);
  const NeighborGraph graph = knn_sscd(ctx, nodes, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_weight_matrix(ctx, graph));
}
BENCHMARK(BM_WeightMatrix)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_SolveProjection(benchmark::State& state) {
  const HyperCube cube = scene(32, static_cast<std::size_t>(state.range(0)));
  Eigen::MatrixXd x = cube.spectra();
  x.colwise() -= x.rowwise().mean();
  const WeightMatrix w = npe_weights(x, 10, 1e-3);
  const double ridge = default_ridge(x, 1e-6);
  for (auto _ : state) benchmark::DoNotOptimize(solve_projection(x, w, 10, ridge));
}
BENCHMARK(BM_SolveProjection)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
