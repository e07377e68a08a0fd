#include <doctest.h>

#include <numbers>
#include <set>

#include "gp/domain.hpp"
#include "gp/graph.hpp"
#include "oracles.hpp"

using namespace gp;

namespace {

// composite Simpson, independent of the library Gauss rules
template <typename F>
double simpson(F&& f, double a, double b, int m) {
  const double h = (b - a) / (2 * m);
  double s = f(a) + f(b);
  for (int i = 1; i < 2 * m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("indicator kernels have closed-form constants") {
  const KernelProfile k1 = make_kernel(KernelKind::Indicator, 1);
  CHECK(k1(0.3) == doctest::Approx(0.5).epsilon(1e-14));
  // int_{-1}^{1} z^2 / 2 dz
  CHECK(k1.sigma() == doctest::Approx(simpson([](double z) { return z * z / 2; }, -1, 1, 10)).epsilon(1e-12));
  CHECK(k1.sigma() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const KernelProfile k2 = make_kernel(KernelKind::Indicator, 2);
  CHECK(k2(0.9) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-14));
  // polar form of int z_1^2 eta over the unit disk
  const double oracle = simpson(
      [](double r) {
        return r * r * r / std::numbers::pi *
               simpson([](double t) { return std::cos(t) * std::cos(t); }, 0, 2 * std::numbers::pi, 64);
      },
      0, 1, 64);
  CHECK(k2.sigma() == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(k2.sigma() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(make_kernel(KernelKind::Indicator, 3).sigma() == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("every kernel has unit mass, is non-increasing and supported in [0,1]") {
  for (int d = 1; d <= 3; ++d)
    for (auto kind : {KernelKind::Indicator, KernelKind::Cone, KernelKind::SmoothBump}) {
      const KernelProfile k = make_kernel(kind, d);
      const double area = sphere_area(d);
      const double mass = area * simpson([&](double r) { return k(r) * std::pow(r, d - 1); }, 0, 1, 20000);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(k.sigma() > 0.0);
      CHECK(k(1.0001) == 0.0);
      CHECK(k(3.0) == 0.0);
      double prev = k(0.0);
      for (double t = 0.01; t <= 1.0; t += 0.01) {
        CHECK(k(t) <= prev);
        prev = k(t);
      }
    }
  CHECK_THROWS_AS(make_kernel(KernelKind::Cone, 4), std::invalid_argument);
}

TEST_CASE("second-moment identity for random directions") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto kind : {KernelKind::Indicator, KernelKind::Cone, KernelKind::SmoothBump}) {
    const KernelProfile k = make_kernel(kind, 2);
    for (int trial = 0; trial < 20; ++trial) {
      const double angle = 2 * std::numbers::pi * unit(rng);
      const double eps = 0.05 + 0.95 * unit(rng);
      const Eigen::Vector2d w(std::cos(angle), std::sin(angle));
      // int_{B(0,eps)} |z.w|^2 eta_eps(|z|) dz in polar coordinates
      const double val = simpson(
          [&](double r) {
            return k.scaled(r, eps) * r *
                   simpson(
                       [&](double t) {
                         const double proj = r * (std::cos(t) * w[0] + std::sin(t) * w[1]);
                         return proj * proj;
                       },
                       0, 2 * std::numbers::pi, 32);
          },
          0, eps, 2000);
      CHECK(std::abs(val - eps * eps * k.sigma()) < 1e-6);
    }
  }
  // d = 1 and d = 3 unit directions
  const KernelProfile k1 = make_kernel(KernelKind::Cone, 1);
  const double eps = 0.37;
  const double v1 = 2.0 * simpson([&](double z) { return z * z * k1.scaled(z, eps); }, 0, eps, 4000);
  CHECK(std::abs(v1 - eps * eps * k1.sigma()) < 1e-6);
  const KernelProfile k3 = make_kernel(KernelKind::SmoothBump, 3);
  const double v3 = simpson(
      [&](double r) {
        // int over the sphere of (r cos theta)^2 = r^2 * 4 pi / 3
        return k3.scaled(r, eps) * r * r * r * r * 4.0 * std::numbers::pi / 3.0;
      },
      0, eps, 4000);
  CHECK(std::abs(v3 - eps * eps * k3.sigma()) < 1e-6);
}

TEST_CASE("densities are normalized and bounded") {
  const Domain box = Domain::unit_box(2);
  const Domain disk = Domain::disk(Eigen::Vector2d(0.5, 0.5), 0.5);
  const Domain line = Domain::box(Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 2.0));
  std::vector<Density> all = {Density::constant(box),
                              Density::affine(box, Eigen::Vector2d(0.8, -0.3)),
                              Density::bump(box, 1.5, Eigen::Vector2d(0.3, 0.6), 0.2),
                              Density::constant(disk),
                              Density::bump(disk, 0.7, Eigen::Vector2d(0.5, 0.5), 0.3),
                              Density::affine(line, Eigen::VectorXd::Constant(1, 0.4))};
  std::mt19937_64 rng(9);
  for (const Density& rho : all) {
    const Domain& dom = rho.domain();
    // midpoint oracle on a fine lattice
    const int m = dom.dim() == 1 ? 200000 : 4000;
    double mass = 0.0;
    const Eigen::VectorXd lo = dom.lower(), side = dom.upper() - dom.lower();
    Eigen::VectorXd x(dom.dim());
    if (dom.dim() == 1) {
      for (int i = 0; i < m; ++i) {
        x[0] = lo[0] + (i + 0.5) * side[0] / m;
        mass += rho(x) * side[0] / m;
      }
    } else if (!dom.is_box()) {
      const Eigen::VectorXd c = dom.center();
      mass = simpson(
          [&](double r) {
            return r * simpson(
                           [&](double t) {
                             x << c[0] + r * std::cos(t), c[1] + r * std::sin(t);
                             return rho(x);
                           },
                           0, 2 * std::numbers::pi, 200);
          },
          0, dom.radius(), 200);
    } else {
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          x << lo[0] + (i + 0.5) * side[0] / m, lo[1] + (j + 0.5) * side[1] / m;
          mass += rho(x) * side.prod() / (double(m) * m);
        }
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rho.integrate([&](const Eigen::VectorXd& y) { return rho(y); }) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rho.rho_min() > 0.0);
    const PointSet pts = sample_points(rho, 2000, 5);
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
      CHECK(rho(pts.col(i)) >= rho.rho_min() * (1 - 1e-12));
      CHECK(rho(pts.col(i)) <= rho.rho_max() * (1 + 1e-12));
    }
  }
  CHECK_THROWS_AS(Density::affine(box, Eigen::Vector2d(3.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(Domain::disk(Eigen::Vector3d(0, 0, 0), 1.0), std::invalid_argument);
}

TEST_CASE("sampling is uniform, inside and reproducible") {
  const Density rho = Density::constant(Domain::unit_box(2));
  const PointSet a = sample_points(rho, 10000, 42);
  const PointSet b = sample_points(rho, 10000, 42);
  CHECK(a == b);
  CHECK(a != sample_points(rho, 10000, 43));
  std::vector<int> counts(100, 0);
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    CHECK(rho.domain().contains(a.col(i)));
    ++counts[int(a(0, i) * 10) + 10 * int(a(1, i) * 10)];
  }
  // binomial(10^4, 1/100): mean 100, sd sqrt(99)
  const double band = 4.0 * std::sqrt(10000 * 0.01 * 0.99);
  for (int c : counts) CHECK(std::abs(c - 100.0) <= band);

  const Density narrow = Density::bump(Domain::unit_box(2), 1e6, Eigen::Vector2d(0.5, 0.5), 0.001);
  CHECK_THROWS_AS(sample_points(narrow, 100, 1), std::runtime_error);
  CHECK_THROWS_AS(sample_points(rho, 1, 1), std::invalid_argument);
}

TEST_CASE("graph construction matches a brute-force pair scan") {
  for (int d = 1; d <= 3; ++d)
    for (auto kind : {KernelKind::Indicator, KernelKind::Cone}) {
      const Density rho = Density::constant(Domain::unit_box(d));
      const PointSet pts = sample_points(rho, 500, 77 + d);
      const double eps = d == 1 ? 0.02 : (d == 2 ? 0.08 : 0.2);
      const KernelProfile k = make_kernel(kind, d);
      const Graph g = build_graph(pts, eps, k);
      const Eigen::MatrixXd brute = oracle::pair_weights(pts, eps, k);
      CHECK(g.dense_weights() == brute);
      CHECK(g.degrees().isApprox(oracle::degrees(brute), 1e-13));
      // stored upper triangle, every weight recomputed exactly, none beyond eps
      const SparseMatrix& w = g.upper_weights();
      for (Eigen::Index j = 0; j < w.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(w, j); it; ++it) {
          const double r = (pts.col(it.row()) - pts.col(j)).norm();
          CHECK(r <= eps);
          CHECK(it.value() == k.scaled(r, eps));
          CHECK(g.weight(j, it.row()) == g.weight(it.row(), j));
        }
    }
}

TEST_CASE("graph construction edge cases") {
  const KernelProfile k = make_kernel(KernelKind::Indicator, 2);
  PointSet far(2, 2);
  far << 0.0, 0.9, 0.0, 0.0;
  const Graph g = build_graph(far, 0.75, k);
  CHECK_FALSE(g.connected());
  CHECK(g.component_count() == 2);

  PointSet near(2, 3);
  near << 0.1, 0.5, 1.5, 0.1, 0.1, 0.1;
  const Graph h = build_graph(near, 0.6, k);
  CHECK(h.weight(0, 1) == doctest::Approx(1.0 / (std::numbers::pi * 0.36)).epsilon(1e-14));
  CHECK(h.weight(0, 0) == doctest::Approx(1.0 / (std::numbers::pi * 0.36)).epsilon(1e-14));
  CHECK(h.weight(1, 2) == 0.0);

  CHECK_THROWS_AS(build_graph(PointSet(2, 0), 0.1, k), std::invalid_argument);
  CHECK_THROWS_AS(build_graph(far, 0.5, k), std::invalid_argument);  // n eps^d < 1
  const Density rho = Density::constant(Domain::unit_box(2));
  const PointSet pts = sample_points(rho, 300, 8);
  CHECK(build_graph(pts, 0.2, k).dense_weights() == build_graph(pts, 0.2, k).dense_weights());
}

TEST_CASE("closest point") {
  const Density rho = Density::constant(Domain::unit_box(2));
  const PointSet pts = sample_points(rho, 1000, 19);
  const Graph g = build_graph(pts, 0.1, make_kernel(KernelKind::Indicator, 2));
  CHECK(closest_point(g, pts.col(321)) == 321);
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Vector2d x(unit(rng), unit(rng));
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < pts.cols(); ++i)
      if ((pts.col(i) - x).norm() < (pts.col(best) - x).norm()) best = i;
    CHECK(closest_point(g, x) == best);
  }
  PointSet two(2, 2);
  two << 0.75, 0.25, 0.5, 0.5;
  const Graph h = build_graph(two, 0.8, make_kernel(KernelKind::Indicator, 2));
  CHECK(closest_point(h, Eigen::Vector2d(0.5, 0.5)) == 0);
}

TEST_CASE("graph round trip through csv") {
  const Graph g = oracle::random_graph(80, 0.3, 21, KernelKind::Cone);
  const std::string path = "test_graph_roundtrip.csv";
  save_graph(g, path, 21);
  GraphMetadata meta;
  const Graph h = load_graph(path, &meta);
  CHECK(meta.n == 80);
  CHECK(meta.d == 2);
  CHECK(meta.kernel == "cone");
  CHECK(meta.seed == 21);
  CHECK(meta.sigma_eta == doctest::Approx(g.sigma()));
  CHECK(h.dense_weights() == g.dense_weights());
  CHECK(h.points() == g.points());
}
