#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include <Eigen/Core>

#include "ssmrpe/cube.hpp"
#include "ssmrpe/distance.hpp"
#include "ssmrpe/graph.hpp"

namespace ssmrpe {

enum class Method { kRaw, kPca, kNpe, kSsmrpe };

std::string_view method_name(Method method);
/// Parses "raw", "pca", "npe" or "ssmrpe" (case-sensitive). Throws ConfigError.
Method parse_method(std::string_view name);

/// Linear map y = A^T (x - mean).
///
/// For the graph-embedding methods the columns of `projection` are
/// generalized eigenvectors of (X M X^T, X X^T + ridge I) for the smallest
/// eigenvalues, ascending, each scaled to unit norm under the right-hand
/// matrix. For PCA they are unit-norm covariance eigenvectors with
/// eigenvalues descending. In both cases each column's largest-magnitude
/// entry is positive.
struct EmbeddingModel {
  Method method = Method::kRaw;
  Eigen::MatrixXd projection;   // D x d
  Eigen::VectorXd eigenvalues;  // d
  Eigen::VectorXd mean;         // D, training mean

  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(projection.rows()); }
  std::size_t output_dim() const noexcept { return static_cast<std::size_t>(projection.cols()); }
};

/// Dense (I - W)^T (I - W) for the row-stochastic weights W, so that
/// tr(Y M Y^T) = sum_i |y_i - sum_j W[i][j] y_j|^2.
Eigen::MatrixXd build_m(const WeightMatrix& weights);

/// relative * trace(X X^T) / D.
double default_ridge(const Eigen::MatrixXd& centered, double relative);

/// Smallest-d generalized eigenpairs of (X M X^T, X X^T + ridge I). X is
/// D x n and expected to be column-centered. Throws ConfigError for
/// d outside [1, D] and NumericalError when the right-hand matrix is singular.
EmbeddingModel solve_projection(const Eigen::MatrixXd& data, const Eigen::MatrixXd& m, std::size_t d, double ridge);
/// Same problem, with X M X^T assembled as E E^T, E = X (I - W)^T, so M is
/// never formed.
EmbeddingModel solve_projection(const Eigen::MatrixXd& data, const WeightMatrix& weights, std::size_t d,
                                double ridge);

/// Y = A^T (X - mean). Throws ShapeError if X does not have D rows.
FeatureMatrix project(const EmbeddingModel& model, const Eigen::MatrixXd& data);

EmbeddingModel pca_fit(const Eigen::MatrixXd& data, std::size_t d);

/// Locally linear reconstruction weights from Euclidean k-NN over the
/// columns of `data`, with plain differences x_i - x_j as measures.
WeightMatrix npe_weights(const Eigen::MatrixXd& data, std::size_t k, double eps);

/// Neighborhood preserving embedding. `ridge_relative` is scaled by
/// trace(X X^T)/D of the centered data.
EmbeddingModel npe_fit(const Eigen::MatrixXd& data, std::size_t k, std::size_t d, double eps,
                       double ridge_relative);

/// Spatial-spectral manifold reconstruction embedding fitted on the given
/// training pixels. The neighbor search and combined measures may read any
/// pixel of the context, but only training pixels become graph nodes.
EmbeddingModel ssmrpe_fit(const SscdContext& ctx, std::span<const std::size_t> train_pixels,
                          const GraphOptions& opts, std::size_t d, double ridge_relative);

}  // namespace ssmrpe
