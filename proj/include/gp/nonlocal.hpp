#pragma once

#include <vector>

#include "gp/domain.hpp"
#include "gp/kernel.hpp"

namespace gp {

// int_Omega eta_eps(|x - y|) rho(y) dy
double rho_hat(const Density& rho, const KernelProfile& kernel, double eps, const Eigen::Ref<const Vector>& x);

// Values on a block of lattice cells of side h aligned with the box corner.
class LatticeFunction {
 public:
  LatticeFunction(Vector origin, double h, std::vector<Index> first, std::vector<Index> dims);

  int dim() const { return static_cast<int>(dims_.size()); }
  Index size() const { return values_.size(); }
  double step() const { return h_; }
  const std::vector<Index>& dims() const { return dims_; }
  const std::vector<Index>& first() const { return first_; }
  Vector& values() { return values_; }
  const Vector& values() const { return values_; }
  // rho times clipped cell volume
  Vector& mass_weights() { return mass_; }
  const Vector& mass_weights() const { return mass_; }

  Vector center(Index flat) const;
  // multilinear between cell centers, zero outside the block
  double sample(const Eigen::Ref<const Vector>& x) const;
  Vector sample_all(const PointSet& pts) const;
  // sum of rho * value * cell volume
  double rho_integral() const { return mass_.dot(values_); }

 private:
  Vector origin_;
  double h_;
  std::vector<Index> first_, dims_;
  Vector values_, mass_;
};

// M_eps^k eta_eps^{x0} on a lattice window around x0 (box domains)
LatticeFunction repeated_average(const Density& rho, const KernelProfile& kernel, double eps,
                                 const Eigen::Ref<const Vector>& x0, Index k, double h);

}  // namespace gp
