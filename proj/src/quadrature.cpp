#include "gp/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <stdexcept>

namespace gp {

namespace {

GaussRule golub_welsch(int m) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return rule;
}

std::array<GaussRule, 65> build_rules() {
  std::array<GaussRule, 65> rules;
  for (int m = 1; m <= 64; ++m) rules[m] = golub_welsch(m);
  return rules;
}

}  // namespace

const GaussRule& gauss_legendre(int m) {
  static const std::array<GaussRule, 65> rules = build_rules();
  if (m < 1 || m > 64) throw std::invalid_argument("gauss_legendre: order must be in [1, 64]");
  return rules[m];
}

}  // namespace gp
