#include "ssmrpe/embed.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "ssmrpe/errors.hpp"

namespace ssmrpe {
namespace {

void check_dim(std::size_t d, Eigen::Index bands) {
  if (d == 0 || d > static_cast<std::size_t>(bands)) {
    throw ConfigError("embedding dimension d=" + std::to_string(d) + " must lie in [1, " + std::to_string(bands) +
                      "]");
  }
}

void fix_signs(Eigen::MatrixXd& columns) {
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    Eigen::Index arg = 0;
    columns.col(c).cwiseAbs().maxCoeff(&arg);
    if (columns(arg, c) < 0.0) columns.col(c) *= -1.0;
  }
}

EmbeddingModel solve_pencil(const Eigen::MatrixXd& data, Eigen::MatrixXd lhs, std::size_t d, double ridge) {
  check_dim(d, data.rows());
  if (ridge < 0.0 || !std::isfinite(ridge)) throw ConfigError("ridge must be finite and nonnegative");

  Eigen::MatrixXd rhs = data * data.transpose();
  rhs.diagonal().array() += ridge;
  rhs = 0.5 * (rhs + rhs.transpose()).eval();
  lhs = 0.5 * (lhs + lhs.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rhs_spectrum(rhs, Eigen::EigenvaluesOnly);
  const double top = rhs_spectrum.eigenvalues().maxCoeff();
  if (!(rhs_spectrum.eigenvalues().minCoeff() > 1e-12 * std::max(top, 1.0))) {
    throw NumericalError("X X^T + ridge I is singular; use a positive ridge");
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(lhs, rhs, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) throw NumericalError("generalized eigensolver failed");

  EmbeddingModel model;
  model.projection = solver.eigenvectors().leftCols(static_cast<Eigen::Index>(d));
  model.eigenvalues = solver.eigenvalues().head(static_cast<Eigen::Index>(d));
  model.mean = data.rowwise().mean();
  fix_signs(model.projection);
  if (!model.projection.allFinite() || !model.eigenvalues.allFinite()) {
    throw NumericalError("generalized eigensolver produced non-finite values");
  }
  return model;
}

Eigen::MatrixXd centered(const Eigen::MatrixXd& data, Eigen::VectorXd& mean) {
  mean = data.rowwise().mean();
  return data.colwise() - mean;
}

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kRaw: return "raw";
    case Method::kPca: return "pca";
    case Method::kNpe: return "npe";
    case Method::kSsmrpe: return "ssmrpe";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "raw") return Method::kRaw;
  if (name == "pca") return Method::kPca;
  if (name == "npe") return Method::kNpe;
  if (name == "ssmrpe") return Method::kSsmrpe;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

Eigen::MatrixXd build_m(const WeightMatrix& weights) {
  const Eigen::Index n = weights.values.rows();
  Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd(weights.values);
  return residual.transpose() * residual;
}

double default_ridge(const Eigen::MatrixXd& centered_data, double relative) {
  if (centered_data.rows() == 0) return 0.0;
  return relative * centered_data.squaredNorm() / static_cast<double>(centered_data.rows());
}

EmbeddingModel solve_projection(const Eigen::MatrixXd& data, const Eigen::MatrixXd& m, std::size_t d, double ridge) {
  if (m.rows() != data.cols() || m.cols() != data.cols()) {
    throw ShapeError("M must be n x n with n = " + std::to_string(data.cols()));
  }
  return solve_pencil(data, data * m * data.transpose(), d, ridge);
}

EmbeddingModel solve_projection(const Eigen::MatrixXd& data, const WeightMatrix& weights, std::size_t d,
                                double ridge) {
  if (weights.values.rows() != data.cols() || weights.values.cols() != data.cols()) {
    throw ShapeError("weight matrix must be n x n with n = " + std::to_string(data.cols()));
  }
  const Eigen::MatrixXd residual = data - data * weights.values.transpose();
  return solve_pencil(data, residual * residual.transpose(), d, ridge);
}

FeatureMatrix project(const EmbeddingModel& model, const Eigen::MatrixXd& data) {
  if (data.rows() != model.projection.rows()) {
    throw ShapeError("data has " + std::to_string(data.rows()) + " bands, model expects " +
                     std::to_string(model.projection.rows()));
  }
  return {model.projection.transpose() * (data.colwise() - model.mean)};
}

EmbeddingModel pca_fit(const Eigen::MatrixXd& data, std::size_t d) {
  check_dim(d, data.rows());
  if (data.cols() < 2) throw ConfigError("PCA needs at least two samples");
  EmbeddingModel model;
  model.method = Method::kPca;
  const Eigen::MatrixXd x = centered(data, model.mean);
  const Eigen::MatrixXd cov = x * x.transpose() / static_cast<double>(data.cols() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw NumericalError("covariance eigendecomposition failed");
  // Eigen returns ascending order; PCA keeps the largest.
  const auto dd = static_cast<Eigen::Index>(d);
  model.projection = solver.eigenvectors().rightCols(dd).rowwise().reverse();
  model.eigenvalues = solver.eigenvalues().tail(dd).reverse();
  fix_signs(model.projection);
  return model;
}

WeightMatrix npe_weights(const Eigen::MatrixXd& data, std::size_t k, double eps) {
  const NeighborGraph graph = knn_euclidean(data, k);
  const auto n = static_cast<Eigen::Index>(data.cols());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) * k);
  Eigen::MatrixXd diffs(data.rows(), static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& neighbors = graph.adjacency[static_cast<std::size_t>(i)];
    for (std::size_t a = 0; a < k; ++a) {
      diffs.col(static_cast<Eigen::Index>(a)) = data.col(i) - data.col(static_cast<Eigen::Index>(neighbors[a].node));
    }
    const Eigen::VectorXd w = reconstruction_weights(diffs.transpose() * diffs, eps);
    for (std::size_t a = 0; a < k; ++a) {
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(neighbors[a].node), w[static_cast<Eigen::Index>(a)]);
    }
  }
  WeightMatrix out;
  out.values.resize(n, n);
  out.values.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

EmbeddingModel npe_fit(const Eigen::MatrixXd& data, std::size_t k, std::size_t d, double eps,
                       double ridge_relative) {
  check_dim(d, data.rows());
  Eigen::VectorXd mean;
  const Eigen::MatrixXd x = centered(data, mean);
  const WeightMatrix weights = npe_weights(x, k, eps);
  EmbeddingModel model = solve_projection(x, weights, d, default_ridge(x, ridge_relative));
  model.method = Method::kNpe;
  model.mean = mean;
  return model;
}

EmbeddingModel ssmrpe_fit(const SscdContext& ctx, std::span<const std::size_t> train_pixels,
                          const GraphOptions& opts, std::size_t d, double ridge_relative) {
  check_dim(d, static_cast<Eigen::Index>(ctx.raw().bands()));
  const NeighborGraph graph = knn_sscd(ctx, train_pixels, opts.k);
  const WeightMatrix weights = build_weight_matrix(ctx, graph, opts);

  const HyperCube& source = opts.filtered_measures ? ctx.filtered() : ctx.raw();
  Eigen::VectorXd mean;
  const Eigen::MatrixXd x = centered(source.gather(train_pixels), mean);
  EmbeddingModel model = solve_projection(x, weights, d, default_ridge(x, ridge_relative));
  model.method = Method::kSsmrpe;
  model.mean = mean;
  return model;
}

}  // namespace ssmrpe
