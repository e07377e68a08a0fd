#include <doctest.h>

#include "gp/graph.hpp"
#include "gp/poisson.hpp"
#include "oracles.hpp"

using namespace gp;

namespace {

Graph path3() {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
  w(0, 1) = w(1, 0) = 1.0;
  w(1, 2) = w(2, 1) = 1.0;
  return Graph::from_dense(w);
}

Graph pair_graph(double w12, double eps, KernelKind kind = KernelKind::Indicator) {
  Eigen::MatrixXd w(2, 2);
  w << 0.0, w12, w12, 0.0;
  return Graph::from_dense(w, GraphScale{eps, make_kernel(kind, 2)});
}

}  // namespace

TEST_CASE("inner product") {
  const Graph g = oracle::random_graph(40, 0.4, 1);
  CHECK(inner(GraphFunction::constant(g, 1.0), GraphFunction::constant(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  const GraphFunction v(g, oracle::random_vector(g.size(), 2));
  CHECK(inner(graph_delta(g, 7), v) == doctest::Approx(v[7]).epsilon(1e-14));

  const Graph two = pair_graph(1.0, 0.5);
  CHECK(inner(GraphFunction(two, Eigen::Vector2d(1, 2)), GraphFunction(two, Eigen::Vector2d(3, 4))) == 5.5);

  const Graph other = oracle::random_graph(40, 0.4, 3);
  CHECK_THROWS_AS(inner(v, GraphFunction::constant(other, 1.0)), std::invalid_argument);
}

TEST_CASE("p-norms") {
  const Graph g = oracle::random_graph(30, 0.5, 4);
  for (double p : {1.0, 1.5, 2.0, 3.0}) CHECK(pnorm(GraphFunction::constant(g, -2.5), p) == doctest::Approx(2.5));
  CHECK(pnorm(graph_delta(g, 3), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(4, 4);
  const Graph four = Graph::from_dense(w);
  CHECK(pnorm(GraphFunction(four, Eigen::Vector4d(1, -1, 1, -1)), 2.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(pnorm(GraphFunction::constant(g, 1.0), 0.5), std::invalid_argument);
}

TEST_CASE("weighted mean") {
  const Graph p = path3();
  CHECK(p.degrees()[0] == 1.0);
  CHECK(p.degrees()[1] == 2.0);
  CHECK(p.degrees()[2] == 1.0);
  CHECK(weighted_mean(p, GraphFunction(p, Eigen::Vector3d(1, 0, 0))) == doctest::Approx(0.25));

  const Graph g = oracle::random_graph(60, 0.35, 5);
  CHECK(weighted_mean(g, GraphFunction::constant(g, 3.25)) == doctest::Approx(3.25).epsilon(1e-15));
  GraphFunction u(g, oracle::random_vector(g.size(), 6));
  u.values().array() -= weighted_mean(g, u);
  CHECK(std::abs(weighted_mean(g, u)) < 1e-14);

  const Graph empty = Graph::from_dense(Eigen::MatrixXd::Zero(3, 3));
  CHECK_THROWS_AS(weighted_mean(empty, GraphFunction::constant(empty, 1.0)), std::invalid_argument);
}

TEST_CASE("graph delta") {
  const Graph four = Graph::from_dense(Eigen::MatrixXd::Ones(4, 4));
  const GraphFunction delta = graph_delta(four, 2);
  CHECK(delta.values() == Eigen::Vector4d(0, 0, 4, 0));
  CHECK(inner(delta, delta) == doctest::Approx(4.0));
  CHECK(pnorm(delta, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(graph_delta(four, 4), std::out_of_range);
}

TEST_CASE("laplacian variants") {
  const Graph two = Graph::from_dense((Eigen::Matrix2d() << 0, 1, 1, 0).finished());
  const GraphFunction e1(two, Eigen::Vector2d(1, 0));
  CHECK(laplacian_apply(two, LaplacianKind::Unnormalized, e1).values() == Eigen::Vector2d(1, -1));

  const Graph g = oracle::random_graph(50, 0.35, 7, KernelKind::Cone);
  const Eigen::MatrixXd w = g.dense_weights();
  const GraphFunction u(g, oracle::random_vector(g.size(), 8));
  const GraphFunction v(g, oracle::random_vector(g.size(), 9));

  const GraphFunction lrw_u = laplacian_apply(g, LaplacianKind::RandomWalk, u);
  const GraphFunction lrwt_v = laplacian_apply(g, LaplacianKind::RandomWalkAdjoint, v);
  CHECK(std::abs(inner(lrw_u, v) - inner(u, lrwt_v)) < 1e-12 * pnorm(u, 2) * pnorm(v, 2));

  // against the dense matrices
  CHECK((lrw_u.values() - oracle::random_walk(w) * u.values()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((lrwt_v.values() - oracle::random_walk_adjoint(w) * v.values()).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::VectorXd lu = laplacian_apply(g, LaplacianKind::Unnormalized, u.values());
  CHECK((lu - oracle::unnormalized(w) * u.values()).cwiseAbs().maxCoeff() < 1e-10 * lu.cwiseAbs().maxCoeff());
  const Eigen::VectorXd ls = laplacian_apply(g, LaplacianKind::GeometricScaled, u.values());
  const double s = 1.0 / (g.sigma() * g.eps() * g.eps() * (g.size() - 1));
  CHECK((ls - s * lu).cwiseAbs().maxCoeff() <= 1e-14 * ls.cwiseAbs().maxCoeff());

  // L_rw^T u = deg L_rw (deg^{-1} u)
  const Eigen::VectorXd& deg = g.degrees();
  const Eigen::VectorXd lhs = laplacian_apply(g, LaplacianKind::RandomWalkAdjoint, u.values());
  const Eigen::VectorXd rhs =
      deg.cwiseProduct(laplacian_apply(g, LaplacianKind::RandomWalk, Eigen::VectorXd(u.values().cwiseQuotient(deg))));
  CHECK((lhs - rhs).norm() <= 1e-12 * lhs.norm());
}

TEST_CASE("null spaces") {
  const Graph g = oracle::random_graph(120, 0.25, 10, KernelKind::SmoothBump);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(g.size(), 1.7);
  for (auto kind : {LaplacianKind::Unnormalized, LaplacianKind::RandomWalk, LaplacianKind::GeometricScaled})
    CHECK(laplacian_apply(g, kind, c).cwiseAbs().maxCoeff() <= 1e-13);
  // the adjoint annihilates the degree vector rather than the constants
  CHECK(laplacian_apply(g, LaplacianKind::RandomWalkAdjoint, g.degrees()).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("zero degree rejected by normalized kinds") {
  const Graph g = Graph::from_dense(Eigen::MatrixXd::Zero(2, 2));
  const GraphFunction u = GraphFunction::constant(g, 1.0);
  CHECK_THROWS_AS(laplacian_apply(g, LaplacianKind::RandomWalk, u), std::domain_error);
  CHECK_THROWS_AS(laplacian_apply(g, LaplacianKind::RandomWalkAdjoint, u), std::domain_error);
}

TEST_CASE("dirichlet energy") {
  const Graph g = oracle::random_graph(150, 0.2, 11);
  CHECK(dirichlet_energy(g, GraphFunction::constant(g, 4.0)) == 0.0);
  for (std::uint64_t seed : {12, 13, 14}) {
    const GraphFunction u(g, oracle::random_vector(g.size(), seed));
    const double e = dirichlet_energy(g, u);
    const double op = inner(u, laplacian_apply(g, LaplacianKind::GeometricScaled, u));
    CHECK(std::abs(e - op) <= 1e-12 * std::abs(op));
    CHECK(dirichlet_energy(g, 2.0 * u) == doctest::Approx(4.0 * e).epsilon(1e-14));
  }
  // ordered-pair sum with eta_eps, halved
  const Eigen::MatrixXd w = oracle::pair_weights(g.points(), g.eps(), g.kernel());
  const GraphFunction u(g, oracle::random_vector(g.size(), 15));
  double pairs = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    for (Eigen::Index j = 0; j < g.size(); ++j) pairs += w(i, j) * std::pow(u[i] - u[j], 2);
  const double n = static_cast<double>(g.size());
  CHECK(dirichlet_energy(g, u) == doctest::Approx(0.5 * pairs / (g.sigma() * g.eps() * g.eps() * n * (n - 1))));
}

TEST_CASE("discrete energy and its minimizer") {
  const Graph g = oracle::random_graph(45, 0.45, 16);
  const GraphFunction u(g, oracle::random_vector(g.size(), 17));
  const GraphFunction f(g, oracle::random_vector(g.size(), 18));
  CHECK(energy_discrete(g, GraphFunction(g), f) == 0.0);
  CHECK(energy_discrete(g, u, GraphFunction(g)) == doctest::Approx(0.5 * dirichlet_energy(g, u)));

  SourceSpec s;
  s.anchors = {Eigen::Vector2d(0.25, 0.3), Eigen::Vector2d(0.7, 0.75)};
  s.coefficients = Eigen::Vector2d(1.0, -1.0);
  const auto [ustar, report] = solve_graph_poisson(g, s);
  const GraphFunction fs = source_term(g, anchor_nodes(g, s));
  const double e0 = energy_discrete(g, ustar, fs);
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    GraphFunction v(g, oracle::random_vector(g.size(), seed));
    v.values().array() -= weighted_mean(g, v);
    for (double t : {-0.1, 0.1}) CHECK(energy_discrete(g, ustar + t * v, fs) >= e0);
  }
}
