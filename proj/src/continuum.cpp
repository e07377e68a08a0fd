#include "gp/continuum.hpp"

#include <Eigen/SparseCholesky>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "gp/cg.hpp"

namespace gp {

Index GridGeometry::size() const {
  Index total = 1;
  for (Index n : dims) total *= n;
  return total;
}

Vector GridGeometry::center(Index flat) const {
  Vector c(dim());
  for (int a = 0; a < dim(); ++a) {
    c[a] = lower[a] + (static_cast<double>(flat % dims[a]) + 0.5) * h;
    flat /= dims[a];
  }
  return c;
}

Index GridGeometry::flat_index(const std::vector<Index>& idx) const {
  Index flat = 0, stride = 1;
  for (int a = 0; a < dim(); ++a) {
    flat += idx[a] * stride;
    stride *= dims[a];
  }
  return flat;
}

Index GridGeometry::cell_of(const Eigen::Ref<const Vector>& x) const {
  std::vector<Index> idx(dim());
  for (int a = 0; a < dim(); ++a)
    idx[a] = std::clamp<Index>(static_cast<Index>(std::floor((x[a] - lower[a]) / h)), 0, dims[a] - 1);
  return flat_index(idx);
}

struct ReferenceGrid::Factor {
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
};

ReferenceGrid::ReferenceGrid(const Density& rho, double h) : rho_(rho) {
  const Domain& domain = rho.domain();
  if (!domain.is_box()) throw std::invalid_argument("reference grid: box domains only");
  if (!(h > 0.0)) throw std::invalid_argument("reference grid: h must be positive");
  const int d = domain.dim();
  geo_.lower = domain.lower();
  geo_.upper = domain.upper();
  geo_.h = h;
  geo_.dims.resize(d);
  for (int a = 0; a < d; ++a) {
    const double cells = (geo_.upper[a] - geo_.lower[a]) / h;
    const double rounded = std::round(cells);
    if (rounded < 2.0 || std::abs(cells - rounded) > 1e-9 * rounded)
      throw std::invalid_argument("reference grid: h must divide each box side");
    geo_.dims[a] = static_cast<Index>(rounded);
  }
  const Index n = geo_.size();
  rho_cells_.resize(n);
  for (Index c = 0; c < n; ++c) rho_cells_[c] = rho(geo_.center(c));
  faces_.assign(d, Vector::Zero(n));
  Index stride = 1;
  for (int a = 0; a < d; ++a) {
    for (Index c = 0; c < n; ++c) {
      if ((c / stride) % geo_.dims[a] == geo_.dims[a] - 1) continue;
      const double p = rho_cells_[c] * rho_cells_[c], q = rho_cells_[c + stride] * rho_cells_[c + stride];
      faces_[a][c] = 2.0 * p * q / (p + q);
    }
    stride *= geo_.dims[a];
  }
}

ReferenceGrid build_grid(const Density& rho, double h) { return ReferenceGrid(rho, h); }

Vector ReferenceGrid::apply(const Vector& u) const {
  const Index n = size();
  Vector out = Vector::Zero(n);
  Index stride = 1;
  for (int a = 0; a < geo_.dim(); ++a) {
    const Vector& k = faces_[a];
    for (Index c = 0; c < n; ++c) {
      if (k[c] == 0.0) continue;
      const double flux = k[c] * (u[c] - u[c + stride]);
      out[c] += flux;
      out[c + stride] -= flux;
    }
    stride *= geo_.dims[a];
  }
  return out / (geo_.h * geo_.h);
}

SparseMatrix ReferenceGrid::stencil() const {
  const Index n = size();
  std::vector<Eigen::Triplet<double>> trip;
  Index stride = 1;
  for (int a = 0; a < geo_.dim(); ++a) {
    for (Index c = 0; c < n; ++c) {
      const double k = faces_[a][c];
      if (k == 0.0) continue;
      trip.emplace_back(c, c, k);
      trip.emplace_back(c + stride, c + stride, k);
      trip.emplace_back(c, c + stride, -k);
      trip.emplace_back(c + stride, c, -k);
    }
    stride *= geo_.dims[a];
  }
  SparseMatrix s(n, n);
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

Vector ReferenceGrid::diagonal() const {
  const Index n = size();
  Vector diag = Vector::Zero(n);
  Index stride = 1;
  for (int a = 0; a < geo_.dim(); ++a) {
    for (Index c = 0; c < n; ++c) {
      const double k = faces_[a][c];
      if (k == 0.0) continue;
      diag[c] += k;
      diag[c + stride] += k;
    }
    stride *= geo_.dims[a];
  }
  return diag / (geo_.h * geo_.h);
}

Vector ReferenceGrid::grounded_solve(const Vector& r) const {
  const Index n = size();
  std::call_once(factor_once_, [&] {
    auto f = std::make_shared<Factor>();
    const SparseMatrix grounded = stencil().topLeftCorner(n - 1, n - 1) / (geo_.h * geo_.h);
    f->ldlt.compute(grounded);
    if (f->ldlt.info() != Eigen::Success) throw std::runtime_error("reference grid: factorization failed");
    factor_ = f;
  });
  Vector z = Vector::Zero(n);
  z.head(n - 1) = factor_->ldlt.solve(r.head(n - 1));
  return z;
}

double weighted_gauge(const ReferenceGrid& grid, const Vector& u) {
  const Vector rho2 = grid.rho().array().square();
  return rho2.dot(u) / rho2.sum();
}

double grid_l1(const GridGeometry& geo, const Vector& u) { return u.cwiseAbs().sum() * geo.cell_volume(); }

GridFunction solve_weighted_poisson(const ReferenceGrid& grid, const Vector& f, double tol, SolveReport* report,
                                    GridPreconditioner pre) {
  const auto t0 = std::chrono::steady_clock::now();
  const GridGeometry& geo = grid.geometry();
  const Index n = grid.size();
  if (f.size() != n) throw std::invalid_argument("continuum solve: source length mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("continuum solve: tolerance must be positive");
  const double vol = geo.cell_volume();
  if (std::abs(f.sum() * vol) > 1e-10 * std::max(f.cwiseAbs().sum() * vol, 1e-300) && f.norm() > 0.0)
    throw std::invalid_argument("continuum solve: incompatible source");
  Vector u = Vector::Zero(n);
  SolveReport rep;
  const double f_norm = f.norm();
  if (f_norm > 0.0) {
    const Vector diag = grid.diagonal();
    auto apply = [&](const Vector& v) -> Vector { return grid.apply(v); };
    auto precond = [&](const Vector& r) -> Vector {
      return pre == GridPreconditioner::Jacobi ? Vector(r.cwiseQuotient(diag)) : grid.grounded_solve(r);
    };
    auto project = [&](Vector& v) { v.array() -= v.mean(); };
    auto stop = [&](const Vector& r) { return r.norm() <= tol * f_norm; };
    const CgReport cg = conjugate_gradient(apply, precond, project, stop, f, u, 20 * n);
    rep.iterations = cg.iterations;
    if (!cg.converged) throw std::runtime_error("continuum solve: conjugate gradients did not converge");
  }
  u.array() -= weighted_gauge(grid, u);
  rep.residual = (grid.apply(u) - f).norm();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (f_norm > 0.0 && !(rep.residual <= tol * f_norm))
    throw std::runtime_error("continuum solve: residual above tolerance after gauge fix");
  if (report) *report = rep;
  return {geo, u};
}

Vector deposit_atoms(const ReferenceGrid& grid, const SourceSpec& s) {
  s.validate(&grid.density().domain());
  const GridGeometry& geo = grid.geometry();
  Vector f = Vector::Zero(grid.size());
  for (Index i = 0; i < s.size(); ++i) f[geo.cell_of(s.anchors[i])] += s.coefficients[i] / geo.cell_volume();
  return f;
}

Vector deposit_bumps(const ReferenceGrid& grid, const SourceSpec& s, double r) {
  s.validate(&grid.density().domain());
  if (!(r > 0.0)) throw std::invalid_argument("bump source: radius must be positive");
  const GridGeometry& geo = grid.geometry();
  if (r <= geo.h) throw std::invalid_argument("bump source: radius below grid resolution");
  Vector f = Vector::Zero(grid.size());
  Vector bump(grid.size());
  for (Index i = 0; i < s.size(); ++i) {
    bump.setZero();
    // centred on the atom's cell
    const Vector x0 = geo.center(geo.cell_of(s.anchors[i]));
    for (Index c = 0; c < grid.size(); ++c) {
      const double t = (geo.center(c) - x0).norm() / r;
      if (t < 1.0) bump[c] = std::exp(-1.0 / (1.0 - t * t));
    }
    const double mass = bump.sum() * geo.cell_volume();
    f += (s.coefficients[i] / mass) * bump;
  }
  return f;
}

GridFunction solve_weighted_poisson(const ReferenceGrid& grid, const SourceSpec& s, double tol, SolveReport* report,
                                    GridPreconditioner pre) {
  return solve_weighted_poisson(grid, deposit_atoms(grid, s), tol, report, pre);
}

GridFunction greens_function(const ReferenceGrid& grid, const Eigen::Ref<const Vector>& y, double tol) {
  const GridGeometry& geo = grid.geometry();
  if (!grid.density().domain().contains(y)) throw std::invalid_argument("greens function: pole outside the domain");
  const Vector rho2 = grid.rho().array().square();
  Vector f = -rho2 / (rho2.sum() * geo.cell_volume());
  f[geo.cell_of(y)] += 1.0 / geo.cell_volume();
  return solve_weighted_poisson(grid, f, tol);
}

Vector interpolate_at(const GridFunction& u, const PointSet& pts) {
  const GridGeometry& geo = u.geometry;
  const int d = geo.dim();
  if (pts.rows() != d) throw std::invalid_argument("interpolate: dimension mismatch");
  Vector out(pts.cols());
  std::vector<Index> base(d), idx(d);
  std::vector<double> frac(d);
  for (Index p = 0; p < pts.cols(); ++p) {
    for (int a = 0; a < d; ++a) {
      const double x = pts(a, p);
      if (!(x >= geo.lower[a] && x <= geo.upper[a])) throw std::invalid_argument("interpolate: point outside domain");
      const double t = std::clamp((x - geo.lower[a]) / geo.h - 0.5, 0.0, static_cast<double>(geo.dims[a] - 1));
      base[a] = std::min<Index>(static_cast<Index>(std::floor(t)), geo.dims[a] - 1);
      frac[a] = t - static_cast<double>(base[a]);
    }
    double sum = 0.0;
    for (int corner = 0; corner < (1 << d); ++corner) {
      double w = 1.0;
      for (int a = 0; a < d; ++a) {
        const int bit = (corner >> a) & 1;
        w *= bit ? frac[a] : 1.0 - frac[a];
        idx[a] = std::min(base[a] + bit, geo.dims[a] - 1);
      }
      if (w != 0.0) sum += w * u.values[geo.flat_index(idx)];
    }
    out[p] = sum;
  }
  return out;
}

void save_grid_function(const GridFunction& u, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(17);
  const GridGeometry& geo = u.geometry;
  const int d = geo.dim();
  for (int a = 0; a < d; ++a) out << "i" << a << ",";
  for (int a = 0; a < d; ++a) out << "x" << a << ",";
  out << "u\n";
  for (Index c = 0; c < geo.size(); ++c) {
    Index rest = c;
    for (int a = 0; a < d; ++a) {
      out << rest % geo.dims[a] << ",";
      rest /= geo.dims[a];
    }
    const Vector x = geo.center(c);
    for (int a = 0; a < d; ++a) out << x[a] << ",";
    out << u.values[c] << "\n";
  }
}

}  // namespace gp
