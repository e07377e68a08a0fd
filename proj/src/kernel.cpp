#include "gp/kernel.hpp"

#include <numbers>
#include <stdexcept>

#include "gp/quadrature.hpp"

namespace gp {

KernelKind parse_kernel(const std::string& name) {
  if (name == "indicator") return KernelKind::Indicator;
  if (name == "cone") return KernelKind::Cone;
  if (name == "bump") return KernelKind::SmoothBump;
  throw std::invalid_argument("unknown kernel: " + name);
}

std::string kernel_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::Indicator: return "indicator";
    case KernelKind::Cone: return "cone";
    case KernelKind::SmoothBump: return "bump";
  }
  return "?";
}

double sphere_area(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
  }
  throw std::invalid_argument("unsupported dimension");
}

double ball_volume(int d) { return sphere_area(d) / d; }

KernelProfile::KernelProfile(KernelKind kind, int d) : kind_(kind), d_(d), c_(1.0) {
  if (d < 1 || d > 3) throw std::invalid_argument("unsupported dimension");
  constexpr int panels = 10000;
  auto moment = [&](int p) {
    return integrate([&](double r) { return (*this)(r)*std::pow(r, p); }, 0.0, 1.0, panels, 8);
  };
  const double area = sphere_area(d);
  const double raw_mass = area * moment(d - 1);
  c_ = 1.0 / raw_mass;
  mass_ = area * moment(d - 1);
  // int z_1^2 eta = (1/d) int |z|^2 eta
  sigma_ = area * moment(d + 1) / d;
}

KernelProfile make_kernel(KernelKind kind, int d) { return KernelProfile(kind, d); }

}  // namespace gp
