#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <mutex>
#include <vector>

#include "gp/domain.hpp"
#include "gp/poisson.hpp"

namespace gp {

// Uniform cell-centred lattice over a box, axis 0 fastest.
struct GridGeometry {
  Vector lower, upper;
  double h = 0.0;
  std::vector<Index> dims;

  int dim() const { return static_cast<int>(dims.size()); }
  Index size() const;
  double cell_volume() const { return std::pow(h, dim()); }
  Vector center(Index flat) const;
  Index flat_index(const std::vector<Index>& idx) const;
  // cell containing x (clamped to the lattice)
  Index cell_of(const Eigen::Ref<const Vector>& x) const;
};

struct GridFunction {
  GridGeometry geometry;
  Vector values;
};

enum class GridPreconditioner { Jacobi, Cholesky };

// Flux-form discretization of -div(rho^2 grad u) with zero-flux walls.
class ReferenceGrid {
 public:
  ReferenceGrid(const Density& rho, double h);

  const GridGeometry& geometry() const { return geo_; }
  const Density& density() const { return rho_; }
  Index size() const { return geo_.size(); }
  // rho at cell centres
  const Vector& rho() const { return rho_cells_; }
  // face coefficients (harmonic means of rho^2) for faces normal to each axis,
  // indexed by the cell on the lower side
  const std::vector<Vector>& faces() const { return faces_; }

  // (A u)_c = h^{-2} sum_faces kappa (u_c - u_nb)
  Vector apply(const Vector& u) const;
  // h^2 A assembled as a sparse symmetric matrix
  SparseMatrix stencil() const;
  Vector diagonal() const;
  // solve of the grounded system (last cell pinned), factorized once
  Vector grounded_solve(const Vector& r) const;

 private:
  struct Factor;
  Density rho_;
  GridGeometry geo_;
  Vector rho_cells_;
  std::vector<Vector> faces_;
  mutable std::once_flag factor_once_;
  mutable std::shared_ptr<Factor> factor_;
};

ReferenceGrid build_grid(const Density& rho, double h);

// cell values a / h^d on the cell containing each anchor
Vector deposit_atoms(const ReferenceGrid& grid, const SourceSpec& s);
// each atom replaced by a discrete radial bump of radius r > h with unit mass, centred on its cell
Vector deposit_bumps(const ReferenceGrid& grid, const SourceSpec& s, double r);

GridFunction solve_weighted_poisson(const ReferenceGrid& grid, const Vector& f, double tol,
                                    SolveReport* report = nullptr,
                                    GridPreconditioner pre = GridPreconditioner::Cholesky);
GridFunction solve_weighted_poisson(const ReferenceGrid& grid, const SourceSpec& s, double tol,
                                    SolveReport* report = nullptr,
                                    GridPreconditioner pre = GridPreconditioner::Cholesky);
// source delta_y - rho^2 / int rho^2
GridFunction greens_function(const ReferenceGrid& grid, const Eigen::Ref<const Vector>& y, double tol);

// sum rho^2 u h^d / sum rho^2 h^d
double weighted_gauge(const ReferenceGrid& grid, const Vector& u);
double grid_l1(const GridGeometry& geo, const Vector& u);

Vector interpolate_at(const GridFunction& u, const PointSet& pts);
void save_grid_function(const GridFunction& u, const std::string& path);

}  // namespace gp
