#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gp/domain.hpp"
#include "gp/graph.hpp"

namespace gp {

// Atomic source sum_i a_i delta_{x_i} with sum_i a_i = 0.
struct SourceSpec {
  std::vector<Vector> anchors;
  Vector coefficients;

  Index size() const { return coefficients.size(); }
  double total_variation() const { return coefficients.cwiseAbs().sum(); }
  SourceSpec scaled(double s) const { return {anchors, s * coefficients}; }
  // compatibility and, when a domain is given, anchors strictly inside it
  void validate(const Domain* domain = nullptr) const;
};

struct SolveOptions {
  double tol = 1e-10;
  Index max_iter = 0;  // 0 means 10 n
  bool jacobi = true;
  std::optional<Vector> initial;
};

struct SolveReport {
  Index iterations = 0;
  double residual = 0.0;  // l2 norm of the equation residual
  double seconds = 0.0;
};

using NodeValues = std::vector<std::pair<Index, double>>;

// tau(x_i) for each anchor; coefficients of colliding anchors are added
NodeValues anchor_nodes(const Graph& g, const SourceSpec& s);
// sum_x a_x delta_x
GraphFunction source_term(const Graph& g, const NodeValues& sources);

std::pair<GraphFunction, SolveReport> solve_graph_poisson(const Graph& g, const SourceSpec& s,
                                                          const SolveOptions& opts = {});
std::pair<GraphFunction, SolveReport> solve_graph_poisson(const Graph& g, const NodeValues& sources,
                                                          const SolveOptions& opts = {});

// L u = rhs with (u)_deg = 0 for a compatible right side
std::pair<Vector, SolveReport> solve_singular(const Graph& g, LaplacianKind kind, const Vector& rhs,
                                              const SolveOptions& opts);

GraphFunction solve_laplace_learning(const Graph& g, const NodeValues& labels, double tol,
                                     SolveReport* report = nullptr);

// gamma for the reweighting, shifted to min gamma = 1
Vector pwll_gamma(const Graph& g, const NodeValues& labels, double tol);
Graph reweight(const Graph& g, const Vector& gamma);
GraphFunction solve_pwll(const Graph& g, const NodeValues& labels, double tol, Vector* gamma = nullptr);

}  // namespace gp
