#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gp/kernel.hpp"
#include "gp/types.hpp"

namespace gp {

// Bandwidth and kernel of a geometric graph.
struct GraphScale {
  double eps = 0.0;
  KernelProfile kernel;
};

// Immutable weighted graph. Weights are kept once per undirected edge
// (upper triangle, self-weights on the diagonal) and applied symmetrically.
class Graph {
 public:
  Graph(PointSet points, SparseMatrix upper, std::optional<GraphScale> scale = std::nullopt);
  // abstract graph from a dense symmetric weight matrix
  static Graph from_dense(const Eigen::MatrixXd& weights, std::optional<GraphScale> scale = std::nullopt);

  Index size() const { return upper_.rows(); }
  int dim() const { return static_cast<int>(points_.rows()); }
  std::uint64_t id() const { return id_; }
  const PointSet& points() const { return points_; }
  const SparseMatrix& upper_weights() const { return upper_; }
  const Vector& degrees() const { return degrees_; }
  bool connected() const { return components_ == 1; }
  Index component_count() const { return components_; }
  const std::vector<Index>& component_labels() const { return labels_; }

  bool has_scale() const { return scale_.has_value(); }
  const GraphScale& scale() const;
  double eps() const { return scale().eps; }
  double sigma() const { return scale().kernel.sigma(); }
  const KernelProfile& kernel() const { return scale().kernel; }

  double weight(Index i, Index j) const;
  // W u with the symmetric weight matrix
  Vector weights_times(const Vector& u) const;
  // sum_y w_xy (u(x) - u(y)), exact zero on constants
  Vector laplacian_times(const Vector& u) const;
  Eigen::MatrixXd dense_weights() const;
  Index edge_count() const { return upper_.nonZeros(); }

 private:
  PointSet points_;
  SparseMatrix upper_;
  std::optional<GraphScale> scale_;
  Vector degrees_;
  std::vector<Index> labels_;
  Index components_ = 0;
  std::uint64_t id_ = 0;
};

// Real vector indexed by the nodes of one graph.
class GraphFunction {
 public:
  explicit GraphFunction(const Graph& g) : id_(g.id()), values_(Vector::Zero(g.size())) {}
  GraphFunction(const Graph& g, Vector values);
  static GraphFunction constant(const Graph& g, double c) { return {g, Vector::Constant(g.size(), c)}; }

  std::uint64_t graph_id() const { return id_; }
  Index size() const { return values_.size(); }
  const Vector& values() const { return values_; }
  Vector& values() { return values_; }
  double operator[](Index i) const { return values_[i]; }
  double& operator[](Index i) { return values_[i]; }

  GraphFunction& operator+=(const GraphFunction& other);
  GraphFunction& operator-=(const GraphFunction& other);
  GraphFunction& operator*=(double s) {
    values_ *= s;
    return *this;
  }

 private:
  std::uint64_t id_;
  Vector values_;
};

GraphFunction operator+(GraphFunction a, const GraphFunction& b);
GraphFunction operator-(GraphFunction a, const GraphFunction& b);
GraphFunction operator*(double s, GraphFunction a);

void check_same_graph(const Graph& g, const GraphFunction& u);
void check_same_graph(const GraphFunction& u, const GraphFunction& v);

enum class LaplacianKind { Unnormalized, RandomWalk, RandomWalkAdjoint, GeometricScaled };

double inner(const GraphFunction& u, const GraphFunction& v);
double pnorm(const GraphFunction& u, double p);
double weighted_mean(const Graph& g, const GraphFunction& u);
double weighted_mean(const Graph& g, const Vector& u);
GraphFunction graph_delta(const Graph& g, Index x);

Vector laplacian_apply(const Graph& g, LaplacianKind kind, const Vector& u);
GraphFunction laplacian_apply(const Graph& g, LaplacianKind kind, const GraphFunction& u);
// (sigma eps^2 (n-1))^{-1}
double geometric_scaling(const Graph& g);

double dirichlet_energy(const Graph& g, const GraphFunction& u);
double energy_discrete(const Graph& g, const GraphFunction& u, const GraphFunction& f);

// eps-neighbourhood graph with weights eta_eps(|x - y|)
Graph build_graph(const PointSet& points, double eps, const KernelProfile& kernel);
// sum_j eta_eps(|x - x_j|) for an arbitrary point x
double point_degree(const Graph& g, const Eigen::Ref<const Vector>& x);
// nearest node, ties to the smaller index
Index closest_point(const Graph& g, const Eigen::Ref<const Vector>& x);
// nodes within distance r of x, ascending
std::vector<Index> nodes_within(const Graph& g, const Eigen::Ref<const Vector>& x, double r);

struct GraphMetadata {
  Index n = 0;
  int d = 0;
  double eps = 0.0;
  std::string kernel;
  double sigma_eta = 0.0;
  std::uint64_t seed = 0;
};

// edge list "i,j,w" plus "<path>.meta" and "<path>.points.csv"
void save_graph(const Graph& g, const std::string& path, std::uint64_t seed);
Graph load_graph(const std::string& path, GraphMetadata* meta = nullptr);
void save_points(const PointSet& points, const std::string& path);
PointSet load_points(const std::string& path);

}  // namespace gp
