#pragma once

#include <optional>

#include "gp/graph.hpp"
#include "gp/poisson.hpp"

namespace gp {

// Node index or arbitrary point of the domain.
struct HeatCenter {
  std::optional<Index> node;
  Vector point;

  static HeatCenter at_node(Index i) { return {i, Vector()}; }
  static HeatCenter at_point(const Vector& x) { return {std::nullopt, x}; }
};

struct HeatColumn {
  HeatCenter center;
  Index k = 0;
  GraphFunction values;
};

inline constexpr Index max_heat_steps = 1000000;

// H <- (I - L_rw^T) H
Vector heat_step(const Graph& g, const Vector& h);

HeatColumn heat_column(const Graph& g, const HeatCenter& x, Index k);
HeatColumn heat_column(const Graph& g, Index x, Index k);
// (1/n) H_1^x(x_i) = eta_eps(|x_i - x|) / deg(x) for an off-graph point
Vector heat_first_step(const Graph& g, const Eigen::Ref<const Vector>& x);

// (I - L_rw)^k u
GraphFunction heat_convolve(const Graph& g, Index k, const GraphFunction& u);
Vector heat_convolve(const Graph& g, Index k, const Vector& u);

// sum_{j<k} H_j^x
GraphFunction heat_partial_sum(const Graph& g, Index x, Index k);

struct SmoothedPoisson {
  GraphFunction u_k;
  GraphFunction f_k;
  double residual = 0.0;  // ||L_{n,eps} u_k - f_k||_2 / ||f_k||_2
};

SmoothedPoisson smooth_poisson(const Graph& g, const GraphFunction& u, const NodeValues& sources, Index k);
SmoothedPoisson smooth_poisson(const Graph& g, const GraphFunction& u, const SourceSpec& s, Index k);

}  // namespace gp
