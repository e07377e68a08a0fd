#pragma once

#include <cmath>
#include <string>

namespace gp {

enum class KernelKind { Indicator, Cone, SmoothBump };

KernelKind parse_kernel(const std::string& name);
std::string kernel_name(KernelKind kind);

// |S^{d-1}| and |B(0,1)| in R^d
double sphere_area(int d);
double ball_volume(int d);

// Radial profile eta normalized to unit mass on B(0,1) in R^d.
class KernelProfile {
 public:
  KernelProfile() = default;
  KernelProfile(KernelKind kind, int d);

  KernelKind kind() const { return kind_; }
  int dim() const { return d_; }
  std::string name() const { return kernel_name(kind_); }

  template <typename Scalar>
  Scalar operator()(Scalar t) const {
    using std::abs;
    using std::exp;
    t = abs(t);
    if (t > Scalar(1)) return Scalar(0);
    switch (kind_) {
      case KernelKind::Indicator: return Scalar(c_);
      case KernelKind::Cone: return Scalar(c_) * (Scalar(1) - t);
      case KernelKind::SmoothBump:
        if (t >= Scalar(1)) return Scalar(0);
        return Scalar(c_) * exp(Scalar(-1) / (Scalar(1) - t * t));
    }
    return Scalar(0);
  }

  // eta_eps(t) = eps^{-d} eta(t / eps)
  double scaled(double t, double eps) const { return scale_factor(eps) * (*this)(t / eps); }
  double scale_factor(double eps) const { return std::pow(eps, -d_); }

  double sigma() const { return sigma_; }
  double peak() const { return (*this)(0.0); }
  double normalization() const { return c_; }
  // |S^{d-1}| * int_0^1 eta(r) r^{d-1} dr, by the same radial rule used for sigma
  double mass() const { return mass_; }

 private:
  KernelKind kind_ = KernelKind::Indicator;
  int d_ = 1;
  double c_ = 0.0;
  double sigma_ = 0.0;
  double mass_ = 0.0;
};

KernelProfile make_kernel(KernelKind kind, int d);

}  // namespace gp
