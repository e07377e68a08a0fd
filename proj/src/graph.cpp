#include "gp/graph.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gp {

namespace {

std::atomic<std::uint64_t> next_graph_id{1};

Index find_root(std::vector<Index>& parent, Index i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

Graph::Graph(PointSet points, SparseMatrix upper, std::optional<GraphScale> scale)
    : points_(std::move(points)), upper_(std::move(upper)), scale_(std::move(scale)), id_(next_graph_id++) {
  const Index n = upper_.rows();
  if (n < 1 || upper_.cols() != n) throw std::invalid_argument("graph: weight matrix must be square and nonempty");
  if (points_.cols() != 0 && points_.cols() != n) throw std::invalid_argument("graph: point count mismatch");
  upper_.makeCompressed();
  std::vector<Index> parent(n);
  std::iota(parent.begin(), parent.end(), Index{0});
  for (Index j = 0; j < n; ++j)
    for (SparseMatrix::InnerIterator it(upper_, j); it; ++it) {
      if (it.row() > j) throw std::invalid_argument("graph: weights must be stored in the upper triangle");
      if (!(it.value() >= 0.0) || !std::isfinite(it.value()))
        throw std::invalid_argument("graph: weights must be finite and nonnegative");
      if (it.value() > 0.0) {
        const Index a = find_root(parent, it.row()), b = find_root(parent, j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  degrees_ = weights_times(Vector::Ones(n));
  labels_.assign(n, -1);
  components_ = 0;
  std::vector<Index> root_label(n, -1);
  for (Index i = 0; i < n; ++i) {
    const Index r = find_root(parent, i);
    if (root_label[r] < 0) root_label[r] = components_++;
    labels_[i] = root_label[r];
  }
}

Graph Graph::from_dense(const Eigen::MatrixXd& weights, std::optional<GraphScale> scale) {
  if (weights.rows() != weights.cols()) throw std::invalid_argument("graph: weight matrix must be square");
  if (weights != weights.transpose())
    throw std::invalid_argument("graph: weight matrix must be symmetric");
  std::vector<Eigen::Triplet<double>> trip;
  for (Index j = 0; j < weights.cols(); ++j)
    for (Index i = 0; i <= j; ++i)
      if (weights(i, j) != 0.0) trip.emplace_back(i, j, weights(i, j));
  SparseMatrix upper(weights.rows(), weights.cols());
  upper.setFromTriplets(trip.begin(), trip.end());
  return Graph(PointSet(0, weights.rows()), std::move(upper), std::move(scale));
}

const GraphScale& Graph::scale() const {
  if (!scale_) throw std::logic_error("graph has no bandwidth or kernel attached");
  return *scale_;
}

double Graph::weight(Index i, Index j) const { return upper_.coeff(std::min(i, j), std::max(i, j)); }

Vector Graph::weights_times(const Vector& u) const {
  if (u.size() != size()) throw std::invalid_argument("graph: vector length mismatch");
  return upper_.selfadjointView<Eigen::Upper>() * u;
}

Vector Graph::laplacian_times(const Vector& u) const {
  if (u.size() != size()) throw std::invalid_argument("graph: vector length mismatch");
  Vector out = Vector::Zero(size());
  for (Index j = 0; j < upper_.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(upper_, j); it; ++it) {
      const double flux = it.value() * (u[it.row()] - u[j]);
      out[it.row()] += flux;
      out[j] -= flux;
    }
  return out;
}

Eigen::MatrixXd Graph::dense_weights() const {
  Eigen::MatrixXd dense = upper_.selfadjointView<Eigen::Upper>() * Eigen::MatrixXd::Identity(size(), size());
  return dense;
}

GraphFunction::GraphFunction(const Graph& g, Vector values) : id_(g.id()), values_(std::move(values)) {
  if (values_.size() != g.size()) throw std::invalid_argument("graph function: length mismatch");
}

GraphFunction& GraphFunction::operator+=(const GraphFunction& other) {
  check_same_graph(*this, other);
  values_ += other.values_;
  return *this;
}

GraphFunction& GraphFunction::operator-=(const GraphFunction& other) {
  check_same_graph(*this, other);
  values_ -= other.values_;
  return *this;
}

GraphFunction operator+(GraphFunction a, const GraphFunction& b) { return a += b; }
GraphFunction operator-(GraphFunction a, const GraphFunction& b) { return a -= b; }
GraphFunction operator*(double s, GraphFunction a) { return a *= s; }

void check_same_graph(const Graph& g, const GraphFunction& u) {
  if (g.id() != u.graph_id() || g.size() != u.size()) throw std::invalid_argument("graph mismatch");
}

void check_same_graph(const GraphFunction& u, const GraphFunction& v) {
  if (u.graph_id() != v.graph_id() || u.size() != v.size()) throw std::invalid_argument("graph mismatch");
}

double inner(const GraphFunction& u, const GraphFunction& v) {
  check_same_graph(u, v);
  return u.values().dot(v.values()) / static_cast<double>(u.size());
}

double pnorm(const GraphFunction& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("pnorm: p must be >= 1");
  const double n = static_cast<double>(u.size());
  if (p == 1.0) return u.values().cwiseAbs().sum() / n;
  if (p == 2.0) return std::sqrt(u.values().squaredNorm() / n);
  return std::pow(u.values().array().abs().pow(p).sum() / n, 1.0 / p);
}

double weighted_mean(const Graph& g, const Vector& u) {
  if (u.size() != g.size()) throw std::invalid_argument("graph mismatch");
  const double total = g.degrees().sum();
  if (!(total > 0.0)) throw std::invalid_argument("weighted_mean: zero total degree");
  return g.degrees().dot(u) / total;
}

double weighted_mean(const Graph& g, const GraphFunction& u) {
  check_same_graph(g, u);
  return weighted_mean(g, u.values());
}

GraphFunction graph_delta(const Graph& g, Index x) {
  if (x < 0 || x >= g.size()) throw std::out_of_range("graph_delta: node index out of range");
  GraphFunction delta(g);
  delta[x] = static_cast<double>(g.size());
  return delta;
}

double geometric_scaling(const Graph& g) {
  if (g.size() < 2) throw std::invalid_argument("geometric scaling needs n >= 2");
  return 1.0 / (g.sigma() * g.eps() * g.eps() * static_cast<double>(g.size() - 1));
}

Vector laplacian_apply(const Graph& g, LaplacianKind kind, const Vector& u) {
  const Vector& deg = g.degrees();
  if (kind == LaplacianKind::RandomWalk || kind == LaplacianKind::RandomWalkAdjoint)
    if ((deg.array() <= 0.0).any()) throw std::domain_error("laplacian: zero-degree node");
  switch (kind) {
    case LaplacianKind::Unnormalized: return g.laplacian_times(u);
    case LaplacianKind::RandomWalk: return g.laplacian_times(u).cwiseQuotient(deg);
    case LaplacianKind::RandomWalkAdjoint: return u - g.weights_times(u.cwiseQuotient(deg));
    case LaplacianKind::GeometricScaled: return geometric_scaling(g) * g.laplacian_times(u);
  }
  return u;
}

GraphFunction laplacian_apply(const Graph& g, LaplacianKind kind, const GraphFunction& u) {
  check_same_graph(g, u);
  return {g, laplacian_apply(g, kind, u.values())};
}

// sum over unordered pairs, equal to <u, L_{n,eps} u>
double dirichlet_energy(const Graph& g, const GraphFunction& u) {
  check_same_graph(g, u);
  const SparseMatrix& w = g.upper_weights();
  const Vector& v = u.values();
  double sum = 0.0;
  for (Index j = 0; j < w.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(w, j); it; ++it) {
      const double diff = v[it.row()] - v[j];
      sum += it.value() * diff * diff;
    }
  return sum * geometric_scaling(g) / static_cast<double>(g.size());
}

double energy_discrete(const Graph& g, const GraphFunction& u, const GraphFunction& f) {
  check_same_graph(u, f);
  return 0.5 * dirichlet_energy(g, u) - inner(u, f);
}

Graph build_graph(const PointSet& points, double eps, const KernelProfile& kernel) {
  const Index n = points.cols();
  const int d = static_cast<int>(points.rows());
  if (n == 0) throw std::invalid_argument("build_graph: empty point list");
  if (d != kernel.dim()) throw std::invalid_argument("build_graph: kernel dimension mismatch");
  if (!(eps > 0.0) || eps > 1.0 || n < 2 || static_cast<double>(n) * std::pow(eps, d) < 1.0)
    throw std::invalid_argument("build_graph: need n >= 2, 0 < eps <= 1 and n eps^d >= 1");

  // bin points into cells of side eps
  const Vector lo = points.rowwise().minCoeff();
  std::vector<std::int64_t> extent(d);
  for (int a = 0; a < d; ++a) extent[a] = static_cast<std::int64_t>((points.row(a).maxCoeff() - lo[a]) / eps) + 1;
  auto cell_of = [&](Index i, std::int64_t* c) {
    for (int a = 0; a < d; ++a)
      c[a] = std::min<std::int64_t>(static_cast<std::int64_t>((points(a, i) - lo[a]) / eps), extent[a] - 1);
  };
  auto key_of = [&](const std::int64_t* c) {
    std::int64_t key = 0;
    for (int a = d - 1; a >= 0; --a) key = key * extent[a] + c[a];
    return key;
  };
  std::vector<std::int64_t> keys(n);
  std::int64_t c[3];
  for (Index i = 0; i < n; ++i) {
    cell_of(i, c);
    keys[i] = key_of(c);
  }
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return keys[a] < keys[b]; });
  std::vector<std::int64_t> cell_keys;
  std::vector<Index> cell_start;
  for (Index p = 0; p < n; ++p)
    if (p == 0 || keys[order[p]] != keys[order[p - 1]]) {
      cell_keys.push_back(keys[order[p]]);
      cell_start.push_back(p);
    }
  cell_start.push_back(n);

  int stencil = 1;
  for (int a = 0; a < d; ++a) stencil *= 3;
  const double scale = kernel.scale_factor(eps);
  std::vector<Eigen::Triplet<double>> trip;
  std::int64_t nb[3];
  for (Index i = 0; i < n; ++i) {
    cell_of(i, c);
    for (int s = 0; s < stencil; ++s) {
      int rest = s;
      bool inside = true;
      for (int a = 0; a < d; ++a) {
        nb[a] = c[a] + rest % 3 - 1;
        rest /= 3;
        if (nb[a] < 0 || nb[a] >= extent[a]) inside = false;
      }
      if (!inside) continue;
      const auto it = std::lower_bound(cell_keys.begin(), cell_keys.end(), key_of(nb));
      if (it == cell_keys.end() || *it != key_of(nb)) continue;
      const auto cell = it - cell_keys.begin();
      for (Index p = cell_start[cell]; p < cell_start[cell + 1]; ++p) {
        const Index j = order[p];
        if (j < i) continue;
        const double dist = (points.col(i) - points.col(j)).norm();
        if (dist > eps) continue;
        const double w = scale * kernel(dist / eps);
        if (w > 0.0) trip.emplace_back(i, j, w);
      }
    }
  }
  SparseMatrix upper(n, n);
  upper.setFromTriplets(trip.begin(), trip.end());
  return Graph(points, std::move(upper), GraphScale{eps, kernel});
}

double point_degree(const Graph& g, const Eigen::Ref<const Vector>& x) {
  const double eps = g.eps();
  const KernelProfile& k = g.kernel();
  double deg = 0.0;
  for (Index j = 0; j < g.size(); ++j) deg += k.scaled((g.points().col(j) - x).norm(), eps);
  return deg;
}

Index closest_point(const Graph& g, const Eigen::Ref<const Vector>& x) {
  if (g.points().cols() == 0) throw std::invalid_argument("closest_point: graph carries no coordinates");
  if (x.size() != g.dim()) throw std::invalid_argument("closest_point: dimension mismatch");
  Index best = 0;
  double best_d = (g.points().col(0) - x).squaredNorm();
  for (Index i = 1; i < g.size(); ++i) {
    const double dist = (g.points().col(i) - x).squaredNorm();
    if (dist < best_d) {
      best_d = dist;
      best = i;
    }
  }
  return best;
}

std::vector<Index> nodes_within(const Graph& g, const Eigen::Ref<const Vector>& x, double r) {
  std::vector<Index> out;
  for (Index i = 0; i < g.size(); ++i)
    if ((g.points().col(i) - x).norm() <= r) out.push_back(i);
  return out;
}

}  // namespace gp
