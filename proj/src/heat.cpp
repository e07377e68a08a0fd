#include "gp/heat.hpp"

#include <stdexcept>

namespace gp {

namespace {

void check_steps(Index k) {
  if (k < 0) throw std::invalid_argument("heat: k must be nonnegative");
  if (k > max_heat_steps) throw std::invalid_argument("heat: step count above cap");
}

void check_degrees(const Graph& g) {
  if ((g.degrees().array() <= 0.0).any()) throw std::domain_error("heat: zero-degree node");
}

void guard_finite(const Vector& v) {
  if (!v.allFinite()) throw std::runtime_error("heat: non-finite values");
}

}  // namespace

Vector heat_step(const Graph& g, const Vector& h) { return g.weights_times(h.cwiseQuotient(g.degrees())); }

Vector heat_first_step(const Graph& g, const Eigen::Ref<const Vector>& x) {
  const double eps = g.eps();
  const KernelProfile& k = g.kernel();
  const Index n = g.size();
  Vector h(n);
  for (Index i = 0; i < n; ++i) h[i] = k.scaled((g.points().col(i) - x).norm(), eps);
  const double deg = h.sum();
  if (!(deg > 0.0)) throw std::domain_error("heat: isolated center point");
  return h * (static_cast<double>(n) / deg);
}

HeatColumn heat_column(const Graph& g, const HeatCenter& x, Index k) {
  check_steps(k);
  check_degrees(g);
  Vector h;
  Index done = 0;
  if (x.node) {
    h = graph_delta(g, *x.node).values();
  } else {
    if (k == 0) throw std::invalid_argument("heat: an off-graph center needs k >= 1");
    h = heat_first_step(g, x.point);
    done = 1;
  }
  for (Index j = done; j < k; ++j) {
    h = heat_step(g, h);
    if (j % 64 == 63) guard_finite(h);
  }
  guard_finite(h);
  return {x, k, GraphFunction(g, std::move(h))};
}

HeatColumn heat_column(const Graph& g, Index x, Index k) { return heat_column(g, HeatCenter::at_node(x), k); }

Vector heat_convolve(const Graph& g, Index k, const Vector& u) {
  check_steps(k);
  check_degrees(g);
  Vector v = u;
  for (Index j = 0; j < k; ++j) {
    v = g.weights_times(v).cwiseQuotient(g.degrees());
    if (j % 64 == 63) guard_finite(v);
  }
  guard_finite(v);
  return v;
}

GraphFunction heat_convolve(const Graph& g, Index k, const GraphFunction& u) {
  check_same_graph(g, u);
  return {g, heat_convolve(g, k, u.values())};
}

GraphFunction heat_partial_sum(const Graph& g, Index x, Index k) {
  check_steps(k);
  check_degrees(g);
  Vector h = graph_delta(g, x).values();
  Vector sum = Vector::Zero(g.size());
  for (Index j = 0; j < k; ++j) {
    sum += h;
    h = heat_step(g, h);
  }
  guard_finite(sum);
  return {g, sum};
}

SmoothedPoisson smooth_poisson(const Graph& g, const GraphFunction& u, const NodeValues& sources, Index k) {
  check_same_graph(g, u);
  const GraphFunction f = source_term(g, sources);
  const Vector lu = laplacian_apply(g, LaplacianKind::GeometricScaled, u.values());
  const double f_norm = f.values().norm();
  if (!((lu - f.values()).norm() <= 1e-8 * std::max(f_norm, 1e-300) || (f_norm == 0.0 && lu.norm() <= 1e-8)))
    throw std::invalid_argument("smooth_poisson: u does not solve the graph Poisson problem");
  Vector fk = Vector::Zero(g.size());
  for (const auto& [node, a] : sources) fk += a * heat_column(g, node, k).values.values();
  GraphFunction uk = heat_convolve(g, k, u);
  const double fk_norm = fk.norm();
  const double res = (laplacian_apply(g, LaplacianKind::GeometricScaled, uk.values()) - fk).norm();
  return {std::move(uk), GraphFunction(g, fk), fk_norm > 0.0 ? res / fk_norm : res};
}

SmoothedPoisson smooth_poisson(const Graph& g, const GraphFunction& u, const SourceSpec& s, Index k) {
  return smooth_poisson(g, u, anchor_nodes(g, s), k);
}

}  // namespace gp
