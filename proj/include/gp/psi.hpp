#pragma once

#include <optional>
#include <string>

#include "gp/kernel.hpp"
#include "gp/types.hpp"

namespace gp {

enum class PsiMethod { GridConvolution, RadialFourier };
std::string psi_method_name(PsiMethod m);

// Radial samples psi(i * step), i = 0..size-1; zero beyond the last sample.
class RadialKernelTable {
 public:
  RadialKernelTable(int d, Index k, double eps, double step, Vector values, PsiMethod method);

  int dim() const { return d_; }
  Index k() const { return k_; }
  double eps() const { return eps_; }
  double step() const { return step_; }
  double r_max() const { return step_ * static_cast<double>(values_.size() - 1); }
  const Vector& values() const { return values_; }
  PsiMethod method() const { return method_; }

  // cubic interpolation in r
  double operator()(double r) const;
  // int over |x| < t of psi, by radial quadrature of the interpolant
  double mass_within(double t) const;
  double mass() const { return mass_within(r_max()); }
  double tail(double t) const { return mass() - mass_within(t); }

 private:
  int d_;
  Index k_;
  double eps_;
  double step_;
  Vector values_;
  PsiMethod method_;
};

// hat(eta)(s) for |y| = s, with hat(f)(y) = int f(z) exp(-2 pi i z.y) dz
double eta_hat(const KernelProfile& kernel, double s);

// psi_k at eps = 1 from the radial Fourier integral
class FourierPsi {
 public:
  FourierPsi(const KernelProfile& kernel, Index k, double r_max);
  double operator()(double r) const;
  double cutoff() const { return cutoff_; }

 private:
  int d_;
  double cutoff_;
  Vector s_, w_;  // quadrature nodes and weights times hat(eta)^k
};

// psi_{k,eps}; d <= 2 defaults to grid convolution, d = 3 to the Fourier route
RadialKernelTable psi_table(const KernelProfile& kernel, Index k, double eps,
                            std::optional<PsiMethod> method = std::nullopt);

struct ScaleConstants {
  int d = 0;
  Index k = 0;
  double eps = 0.0;
  double eps_k = 0.0;
  double R_k = 0.0;
  double theta = 0.0;

  // min{Theta, k exp(-(|z| - eps)_+^2 / (8 d eps_k^2))}
  double phi(double z) const;
};

double theta_dk(int d, Index k);
ScaleConstants scale_constants(int d, Index k, double eps);

}  // namespace gp
