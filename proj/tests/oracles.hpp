#pragma once

// Dense reference computations, written independently of the library code paths.

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "gp/domain.hpp"
#include "gp/graph.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// all pairs, O(n^2)
inline MatrixXd pair_weights(const gp::PointSet& pts, double eps, const gp::KernelProfile& k) {
  const Eigen::Index n = pts.cols();
  MatrixXd w = MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double r = (pts.col(i) - pts.col(j)).norm();
      if (r <= eps) w(i, j) = std::pow(eps, -k.dim()) * k(r / eps);
    }
  return w;
}

inline VectorXd degrees(const MatrixXd& w) { return w.rowwise().sum(); }

inline MatrixXd unnormalized(const MatrixXd& w) {
  MatrixXd l = -w;
  l.diagonal() += degrees(w);
  return l;
}

// I - D^{-1} W
inline MatrixXd random_walk(const MatrixXd& w) {
  const VectorXd deg = degrees(w);
  return MatrixXd::Identity(w.rows(), w.cols()) - deg.cwiseInverse().asDiagonal() * w;
}

// I - W D^{-1}
inline MatrixXd random_walk_adjoint(const MatrixXd& w) {
  const VectorXd deg = degrees(w);
  return MatrixXd::Identity(w.rows(), w.cols()) - w * deg.cwiseInverse().asDiagonal();
}

inline MatrixXd power(const MatrixXd& m, int k) {
  MatrixXd out = MatrixXd::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = m * out;
  return out;
}

// minimum-norm solution of a symmetric singular system
inline VectorXd pinv_solve(const MatrixXd& a, const VectorXd& b) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  const VectorXd lam = es.eigenvalues();
  const double cut = 1e-10 * lam.cwiseAbs().maxCoeff();
  VectorXd coef = es.eigenvectors().transpose() * b;
  for (Eigen::Index i = 0; i < lam.size(); ++i) coef[i] = std::abs(lam[i]) > cut ? coef[i] / lam[i] : 0.0;
  return es.eigenvectors() * coef;
}

// connected random geometric graph on the unit square (retries seeds)
inline gp::Graph random_graph(Eigen::Index n, double eps, std::uint64_t seed,
                              gp::KernelKind kind = gp::KernelKind::Indicator, int d = 2) {
  const gp::Density rho = gp::Density::constant(gp::Domain::unit_box(d));
  const gp::KernelProfile k = gp::make_kernel(kind, d);
  for (std::uint64_t s = seed;; ++s) {
    gp::Graph g = gp::build_graph(gp::sample_points(rho, n, s), eps, k);
    if (g.connected()) return g;
  }
}

inline VectorXd random_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = z(rng);
  return v;
}

}  // namespace oracle
