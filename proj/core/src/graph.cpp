#include "ssmrpe/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/LU>

#include "ssmrpe/errors.hpp"
#include "ssmrpe/parallel.hpp"

namespace ssmrpe {
namespace {

void check_k(std::size_t k, std::size_t n) {
  if (k == 0 || k >= n) {
    throw ConfigError("neighbor count k=" + std::to_string(k) + " must satisfy 1 <= k < n=" + std::to_string(n));
  }
}

// Keeps the k smallest (distance, node) pairs of `candidates`.
std::vector<Neighbor> select_k(std::vector<Neighbor> candidates, std::size_t k) {
  auto less = [](const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.node < b.node);
  };
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k), candidates.end(), less);
  candidates.resize(k);
  return candidates;
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> s) {
  return {s.data(), static_cast<Eigen::Index>(s.size())};
}

}  // namespace

NeighborGraph knn_sscd(const SscdContext& ctx, std::span<const std::size_t> nodes, std::size_t k) {
  const std::size_t n = nodes.size();
  check_k(k, n);
  for (std::size_t pixel : nodes) {
    if (pixel >= ctx.pixel_count()) throw BoundsError("graph node pixel " + std::to_string(pixel) + " out of range");
  }

  NeighborGraph graph;
  graph.k = k;
  graph.nodes.assign(nodes.begin(), nodes.end());
  graph.adjacency.resize(n);
  parallel_for(n, [&](std::size_t i) {
    const auto window = ctx.raw_window(nodes[i]);
    std::vector<Neighbor> candidates;
    candidates.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      candidates.push_back({j, nodes[j], window_distance(ctx.filtered().pixel(nodes[j]), window)});
    }
    graph.adjacency[i] = select_k(std::move(candidates), k);
  });
  return graph;
}

NeighborGraph knn_sscd(const SscdContext& ctx, std::size_t k) {
  std::vector<std::size_t> all(ctx.pixel_count());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return knn_sscd(ctx, all, k);
}

NeighborGraph knn_euclidean(const Eigen::MatrixXd& data, std::size_t k) {
  const auto n = static_cast<std::size_t>(data.cols());
  check_k(k, n);
  NeighborGraph graph;
  graph.k = k;
  graph.nodes.resize(n);
  std::iota(graph.nodes.begin(), graph.nodes.end(), std::size_t{0});
  graph.adjacency.resize(n);
  parallel_for(n, [&](std::size_t i) {
    std::vector<Neighbor> candidates;
    candidates.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = (data.col(static_cast<Eigen::Index>(i)) - data.col(static_cast<Eigen::Index>(j))).norm();
      candidates.push_back({j, j, d});
    }
    graph.adjacency[i] = select_k(std::move(candidates), k);
  });
  return graph;
}

Eigen::VectorXd combined_measure(const SscdContext& ctx, std::size_t i, std::size_t j, const GraphOptions& opts) {
  if (i == j) throw ConfigError("combined measure of pixel " + std::to_string(i) + " with itself");
  const HyperCube& source = opts.filtered_measures ? ctx.filtered() : ctx.raw();
  const double divisor =
      opts.scd_const ? *opts.scd_const : scd(ctx.raw().coord_of(i), ctx.raw().coord_of(j));
  return (as_vector(source.pixel(i)) - as_vector(source.pixel(j))) / divisor;
}

Eigen::MatrixXd gram_z(const SscdContext& ctx, const NeighborGraph& graph, std::size_t node,
                       const GraphOptions& opts) {
  const auto& neighbors = graph.adjacency.at(node);
  Eigen::MatrixXd measures(ctx.raw().bands(), neighbors.size());
  for (std::size_t a = 0; a < neighbors.size(); ++a) {
    measures.col(static_cast<Eigen::Index>(a)) = combined_measure(ctx, graph.nodes[node], neighbors[a].pixel, opts);
  }
  return measures.transpose() * measures;
}

Eigen::VectorXd reconstruction_weights(const Eigen::MatrixXd& z, double eps) {
  if (z.rows() != z.cols() || z.rows() == 0) throw ShapeError("Gram matrix must be square and nonempty");
  if (eps < 0.0) throw ConfigError("Gram regularizer must be nonnegative");
  const Eigen::Index k = z.rows();
  const double trace = z.trace();
  if (trace == 0.0) {
    if (eps == 0.0) throw NumericalError("Gram matrix is zero and no regularization was requested");
    return Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
  }

  Eigen::MatrixXd system = z;
  system.diagonal().array() += eps * trace / static_cast<double>(k);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) throw NumericalError("Gram matrix is singular; increase the regularizer");
  const Eigen::VectorXd u = lu.solve(Eigen::VectorXd::Ones(k));
  const double total = u.sum();
  if (!std::isfinite(total) || total == 0.0) throw NumericalError("reconstruction weights cannot be normalized");
  return u / total;
}

WeightMatrix build_weight_matrix(const SscdContext& ctx, const NeighborGraph& graph, const GraphOptions& opts) {
  const std::size_t n = graph.size();
  std::vector<Eigen::VectorXd> rows(n);
  parallel_for(n, [&](std::size_t i) { rows[i] = reconstruction_weights(gram_z(ctx, graph, i, opts), opts.eps); });

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(n * graph.k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& neighbors = graph.adjacency[i];
    for (std::size_t a = 0; a < neighbors.size(); ++a) {
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(neighbors[a].node), rows[i][static_cast<Eigen::Index>(a)]);
    }
  }
  WeightMatrix out;
  out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.values.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

}  // namespace ssmrpe
