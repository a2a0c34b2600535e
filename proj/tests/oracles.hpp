#pragma once

// Reference implementations used only by tests. Each one follows the textbook
// formula with plain loops or a different decomposition than the library, so
// agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ssmrpe/cube.hpp"

namespace ssmrpe::oracle {

inline HyperCube random_cube(std::size_t h, std::size_t w, std::size_t d, std::mt19937_64& rng, double lo = 0.0,
                             double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> values(h * w * d);
  for (double& v : values) v = u(rng);
  return {h, w, d, std::move(values)};
}

inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline std::vector<double> spectrum(const HyperCube& cube, long p, long q) {
  const auto px = cube.pixel(static_cast<std::size_t>(p) * cube.width() + static_cast<std::size_t>(q));
  return {px.begin(), px.end()};
}

// Raw spectra of the clipped window, enumerated by signed offsets.
inline std::vector<std::vector<double>> window_spectra(const HyperCube& cube, long p, long q, long w) {
  std::vector<std::vector<double>> out;
  const long t = (w - 1) / 2;
  for (long dp = -t; dp <= t; ++dp) {
    for (long dq = -t; dq <= t; ++dq) {
      const long pp = p + dp;
      const long qq = q + dq;
      if (pp < 0 || qq < 0 || pp >= static_cast<long>(cube.height()) || qq >= static_cast<long>(cube.width())) continue;
      out.push_back(spectrum(cube, pp, qq));
    }
  }
  return out;
}

// sum_j v_j x_j / sum_j v_j over the window, v_j = exp(-gamma0 |x_i - x_j|^2).
inline std::vector<double> filtered_pixel(const HyperCube& cube, long p, long q, long w, double gamma0) {
  const auto center = spectrum(cube, p, q);
  std::vector<double> num(center.size(), 0.0);
  double den = 0.0;
  for (const auto& x : window_spectra(cube, p, q, w)) {
    const double v = std::exp(-gamma0 * sq_dist(center, x));
    for (std::size_t b = 0; b < x.size(); ++b) num[b] += v * x[b];
    den += v;
  }
  for (double& v : num) v /= den;
  return num;
}

inline double window_distance(const std::vector<double>& query, const std::vector<std::vector<double>>& window) {
  double sigma = 0.0;
  for (const auto& x : window) sigma += std::sqrt(sq_dist(query, x));
  sigma /= static_cast<double>(window.size());
  if (sigma == 0.0) return 0.0;
  double num = 0.0;
  double den = 0.0;
  for (const auto& x : window) {
    const double dist = std::sqrt(sq_dist(query, x));
    const double v = std::exp(-sq_dist(query, x) / (sigma * sigma));
    num += v * dist;
    den += v;
  }
  return num / den;
}

// Minimizes w^T z w subject to sum(w) = 1 through the KKT system
// [2z 1; 1^T 0] [w; mu] = [0; 1].
inline Eigen::VectorXd kkt_weights(const Eigen::MatrixXd& z) {
  const Eigen::Index k = z.rows();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
  kkt.topLeftCorner(k, k) = 2.0 * z;
  kkt.block(0, k, k, 1).setOnes();
  kkt.block(k, 0, 1, k).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs[k] = 1.0;
  return kkt.colPivHouseholderQr().solve(rhs).head(k);
}

// Well-conditioned random symmetric positive definite matrix.
inline Eigen::MatrixXd random_spd(Eigen::Index k, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd g(k, k + 2);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = n(rng);
  Eigen::MatrixXd z = g * g.transpose() / static_cast<double>(k + 2);
  z.diagonal().array() += 0.5;
  return z;
}

// Sorted real eigenvalues of (B^-1 A) from a general nonsymmetric solver.
inline std::vector<double> pencil_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd c = b.inverse() * a;
  Eigen::EigenSolver<Eigen::MatrixXd> es(c);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i].real());
  std::sort(out.begin(), out.end());
  return out;
}

// Eigenvectors of (B^-1 A) for the given sorted index range, real parts.
inline Eigen::MatrixXd pencil_eigenvectors(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Eigen::Index count) {
  const Eigen::MatrixXd c = b.inverse() * a;
  Eigen::EigenSolver<Eigen::MatrixXd> es(c);
  std::vector<std::pair<double, Eigen::Index>> order;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) order.emplace_back(es.eigenvalues()[i].real(), i);
  std::sort(order.begin(), order.end());
  Eigen::MatrixXd out(a.rows(), count);
  for (Eigen::Index j = 0; j < count; ++j) out.col(j) = es.eigenvectors().col(order[j].second).real();
  return out;
}

// Largest principal angle (radians) between the column spans of u and v.
inline double max_principal_angle(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
  const Eigen::MatrixXd qu = Eigen::HouseholderQR<Eigen::MatrixXd>(u).householderQ() *
                             Eigen::MatrixXd::Identity(u.rows(), u.cols());
  const Eigen::MatrixXd qv = Eigen::HouseholderQR<Eigen::MatrixXd>(v).householderQ() *
                             Eigen::MatrixXd::Identity(v.rows(), v.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(qu.transpose() * qv);
  const double smallest = std::clamp(svd.singularValues().minCoeff(), -1.0, 1.0);
  return std::acos(smallest);
}

// Index of the nearest training column, first wins on ties.
inline std::size_t nearest(const Eigen::MatrixXd& train, const Eigen::VectorXd& query) {
  std::vector<std::pair<double, std::size_t>> d;
  for (Eigen::Index j = 0; j < train.cols(); ++j) d.emplace_back((train.col(j) - query).squaredNorm(), j);
  std::stable_sort(d.begin(), d.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return d.front().second;
}

}  // namespace ssmrpe::oracle
