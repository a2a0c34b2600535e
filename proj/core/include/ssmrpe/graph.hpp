#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ssmrpe/distance.hpp"

namespace ssmrpe {

struct Neighbor {
  std::size_t node = 0;   // position in NeighborGraph::nodes
  std::size_t pixel = 0;  // flat pixel index (equals node for plain data matrices)
  double distance = 0.0;
};

/// Directed k-NN graph over a set of nodes. adjacency[i] holds exactly k
/// distinct neighbors of node i sorted by ascending distance, ties broken by
/// ascending node position. No self loops.
struct NeighborGraph {
  std::size_t k = 0;
  std::vector<std::size_t> nodes;
  std::vector<std::vector<Neighbor>> adjacency;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Row-stochastic reconstruction weights over graph nodes: row i is supported
/// on node i's neighbors and sums to 1. Entries may be negative.
struct WeightMatrix {
  Eigen::SparseMatrix<double, Eigen::RowMajor> values;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.rows()); }
};

struct GraphOptions {
  std::size_t k = 10;
  // Gram regularizer, relative to trace(z)/k.
  double eps = 1e-3;
  // Replaces every coordinate distance in the combined measure by this value.
  std::optional<double> scd_const;
  // Builds combined measures from filtered rather than raw spectra.
  bool filtered_measures = false;
};

/// k nearest neighbors under SSCD among `nodes` (flat pixel indices, distinct).
/// Throws ConfigError unless 1 <= k < nodes.size().
NeighborGraph knn_sscd(const SscdContext& ctx, std::span<const std::size_t> nodes, std::size_t k);
/// Graph over every pixel of the context.
NeighborGraph knn_sscd(const SscdContext& ctx, std::size_t k);

/// k nearest neighbors by Euclidean distance between the columns of `data`.
NeighborGraph knn_euclidean(const Eigen::MatrixXd& data, std::size_t k);

/// (x_i - x_j) / scd(i, j) for pixels i != j.
Eigen::VectorXd combined_measure(const SscdContext& ctx, std::size_t i, std::size_t j,
                                 const GraphOptions& opts = {});

/// z[a][b] = <h_a, h_b> over the combined measures of node i's neighbors.
Eigen::MatrixXd gram_z(const SscdContext& ctx, const NeighborGraph& graph, std::size_t node,
                       const GraphOptions& opts = {});

/// Affine weights minimizing w' z w subject to sum(w) = 1: solves
/// (z + eps * trace(z)/k * I) u = 1 and returns u / sum(u). A zero Gram
/// matrix yields uniform weights when eps > 0. Throws NumericalError on a
/// singular system.
Eigen::VectorXd reconstruction_weights(const Eigen::MatrixXd& z, double eps);

/// Scatters per-node reconstruction weights into an n x n sparse matrix.
WeightMatrix build_weight_matrix(const SscdContext& ctx, const NeighborGraph& graph,
                                 const GraphOptions& opts = {});

}  // namespace ssmrpe
