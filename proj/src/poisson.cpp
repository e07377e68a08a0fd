#include "gp/poisson.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <stdexcept>

#include "gp/cg.hpp"

namespace gp {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void SourceSpec::validate(const Domain* domain) const {
  if (static_cast<Index>(anchors.size()) != coefficients.size())
    throw std::invalid_argument("source: anchor/coefficient count mismatch");
  if (std::abs(coefficients.sum()) > 1e-14 * std::max(1.0, total_variation()))
    throw std::invalid_argument("source: coefficients must sum to zero");
  if (domain)
    for (const Vector& x : anchors)
      if (!domain->contains(x)) throw std::invalid_argument("source: anchor outside the domain");
}

NodeValues anchor_nodes(const Graph& g, const SourceSpec& s) {
  s.validate();
  std::map<Index, double> merged;
  for (Index i = 0; i < s.size(); ++i) merged[closest_point(g, s.anchors[i])] += s.coefficients[i];
  return {merged.begin(), merged.end()};
}

GraphFunction source_term(const Graph& g, const NodeValues& sources) {
  GraphFunction f(g);
  for (const auto& [node, a] : sources) {
    if (node < 0 || node >= g.size()) throw std::out_of_range("source: node index out of range");
    f[node] += a * static_cast<double>(g.size());
  }
  return f;
}

std::pair<Vector, SolveReport> solve_singular(const Graph& g, LaplacianKind kind, const Vector& rhs,
                                              const SolveOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!g.connected()) throw std::invalid_argument("solver: graph is disconnected");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("solver: tolerance must be positive");
  const Index n = g.size();
  const double rhs_norm = rhs.norm();
  if (std::abs(rhs.sum()) > 1e-10 * std::max(rhs.cwiseAbs().sum(), 1e-300) && rhs_norm > 0.0)
    throw std::invalid_argument("solver: incompatible right-hand side");
  SolveReport report;
  Vector x = opts.initial ? *opts.initial : Vector::Zero(n);
  if (x.size() != n) throw std::invalid_argument("solver: initial guess length mismatch");
  auto project = [&](Vector& v) { v.array() -= weighted_mean(g, v); };
  if (rhs_norm == 0.0) {
    x.setZero();
    report.seconds = seconds_since(t0);
    return {x, report};
  }
  const double scale = kind == LaplacianKind::GeometricScaled ? geometric_scaling(g) : 1.0;
  Vector diag(n);
  for (Index i = 0; i < n; ++i) diag[i] = scale * (g.degrees()[i] - g.weight(i, i));
  auto apply = [&](const Vector& v) -> Vector { return laplacian_apply(g, kind, v); };
  auto precond = [&](const Vector& r) -> Vector { return opts.jacobi ? Vector(r.cwiseQuotient(diag)) : r; };
  const double target = opts.tol * rhs_norm;
  auto stop = [&](const Vector& r) { return r.norm() <= target; };
  const Index cap = opts.max_iter > 0 ? opts.max_iter : 10 * n;
  const CgReport cg = conjugate_gradient(apply, precond, project, stop, rhs, x, cap);
  report.iterations = cg.iterations;
  report.residual = (apply(x) - rhs).norm();
  report.seconds = seconds_since(t0);
  if (!cg.converged || !(report.residual <= target))
    throw std::runtime_error("solver: conjugate gradients did not converge within the iteration cap");
  return {x, report};
}

std::pair<GraphFunction, SolveReport> solve_graph_poisson(const Graph& g, const NodeValues& sources,
                                                          const SolveOptions& opts) {
  double total = 0.0, tv = 0.0;
  for (const auto& [node, a] : sources) {
    total += a;
    tv += std::abs(a);
  }
  if (std::abs(total) > 1e-14 * std::max(1.0, tv)) throw std::invalid_argument("source: coefficients must sum to zero");
  const GraphFunction f = source_term(g, sources);
  auto [u, report] = solve_singular(g, LaplacianKind::GeometricScaled, f.values(), opts);
  return {GraphFunction(g, std::move(u)), report};
}

std::pair<GraphFunction, SolveReport> solve_graph_poisson(const Graph& g, const SourceSpec& s,
                                                          const SolveOptions& opts) {
  return solve_graph_poisson(g, anchor_nodes(g, s), opts);
}

GraphFunction solve_laplace_learning(const Graph& g, const NodeValues& labels, double tol, SolveReport* report) {
  const auto t0 = std::chrono::steady_clock::now();
  const Index n = g.size();
  if (labels.empty()) throw std::invalid_argument("laplace learning: empty label set");
  if (!(tol > 0.0)) throw std::invalid_argument("laplace learning: tolerance must be positive");
  Vector given = Vector::Zero(n);
  std::vector<char> labeled(n, 0);
  for (const auto& [node, value] : labels) {
    if (node < 0 || node >= n) throw std::out_of_range("laplace learning: label index out of range");
    if (labeled[node] && given[node] != value) throw std::invalid_argument("laplace learning: conflicting labels");
    labeled[node] = 1;
    given[node] = value;
  }
  std::vector<char> component_has_label(g.component_count(), 0);
  for (Index i = 0; i < n; ++i)
    if (labeled[i]) component_has_label[g.component_labels()[i]] = 1;
  for (Index i = 0; i < n; ++i)
    if (!component_has_label[g.component_labels()[i]])
      throw std::invalid_argument("laplace learning: unlabeled component without labels (singular system)");

  Vector mask(n);
  for (Index i = 0; i < n; ++i) mask[i] = labeled[i] ? 0.0 : 1.0;
  const Vector& deg = g.degrees();
  Vector diag(n);
  for (Index i = 0; i < n; ++i) diag[i] = labeled[i] ? 1.0 : deg[i] - g.weight(i, i);
  auto apply = [&](const Vector& v) -> Vector {
    return laplacian_apply(g, LaplacianKind::Unnormalized, Vector(v.cwiseProduct(mask))).cwiseProduct(mask);
  };
  const Vector b = -laplacian_apply(g, LaplacianKind::Unnormalized, given).cwiseProduct(mask);
  auto precond = [&](const Vector& r) -> Vector { return r.cwiseQuotient(diag); };
  auto project = [&](Vector& v) { v = v.cwiseProduct(mask); };
  auto stop = [&](const Vector& r) { return r.cwiseQuotient(deg).cwiseAbs().maxCoeff() <= tol; };
  Vector v = Vector::Zero(n);
  const CgReport cg = conjugate_gradient(apply, precond, project, stop, b, v, 10 * n);
  Vector u = given + v.cwiseProduct(mask);
  for (Index i = 0; i < n; ++i)
    if (labeled[i]) u[i] = given[i];
  const Vector mvp = laplacian_apply(g, LaplacianKind::RandomWalk, u).cwiseProduct(mask);
  const double residual = mvp.cwiseAbs().maxCoeff();
  if (!cg.converged || !(residual <= tol))
    throw std::runtime_error("laplace learning: conjugate gradients did not converge within the iteration cap");
  if (report) {
    report->iterations = cg.iterations;
    report->residual = residual;
    report->seconds = seconds_since(t0);
  }
  return {g, u};
}

Vector pwll_gamma(const Graph& g, const NodeValues& labels, double tol) {
  if (labels.empty()) throw std::invalid_argument("pwll: empty label set");
  const Index n = g.size();
  std::vector<char> seen(n, 0);
  Vector rhs = Vector::Zero(n);
  for (const auto& [node, value] : labels) {
    if (node < 0 || node >= n) throw std::out_of_range("pwll: label index out of range");
    if (seen[node]) continue;
    seen[node] = 1;
    rhs[node] += 1.0;
    rhs.array() -= 1.0 / static_cast<double>(n);
  }
  SolveOptions opts;
  opts.tol = tol;
  Vector gamma = solve_singular(g, LaplacianKind::Unnormalized, rhs, opts).first;
  gamma.array() += 1.0 - gamma.minCoeff();
  return gamma.cwiseMax(1.0);
}

Graph reweight(const Graph& g, const Vector& gamma) {
  if (gamma.size() != g.size()) throw std::invalid_argument("reweight: length mismatch");
  SparseMatrix w = g.upper_weights();
  for (Index j = 0; j < w.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(w, j); it; ++it) it.valueRef() *= gamma[it.row()] * gamma[j];
  std::optional<GraphScale> scale;
  if (g.has_scale()) scale = g.scale();
  return Graph(g.points(), std::move(w), std::move(scale));
}

GraphFunction solve_pwll(const Graph& g, const NodeValues& labels, double tol, Vector* gamma_out) {
  const Vector gamma = pwll_gamma(g, labels, tol);
  const Graph heavy = reweight(g, gamma);
  const GraphFunction u = solve_laplace_learning(heavy, labels, tol);
  if (gamma_out) *gamma_out = gamma;
  return {g, u.values()};
}

}  // namespace gp
