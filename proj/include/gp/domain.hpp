#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gp/quadrature.hpp"
#include "gp/types.hpp"

namespace gp {

// Open box or disk (disk only in d = 2).
class Domain {
 public:
  static Domain box(const Vector& lower, const Vector& upper);
  static Domain unit_box(int d);
  static Domain disk(const Vector& center, double radius);

  int dim() const { return static_cast<int>(lower_.size()); }
  bool is_box() const { return !disk_; }
  bool contains(const Eigen::Ref<const Vector>& x) const;
  double volume() const;
  // distance from an interior point to the boundary
  double boundary_distance(const Eigen::Ref<const Vector>& x) const;

  // bounding box
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  Vector center() const { return 0.5 * (lower_ + upper_); }
  double radius() const { return radius_; }
  std::string describe() const;

 private:
  Vector lower_, upper_;
  bool disk_ = false;
  double radius_ = 0.0;
};

enum class DensityKind { Constant, Affine, Bump };

// Probability density on a domain, normalized so that its integral is 1.
class Density {
 public:
  static Density constant(const Domain& domain);
  // proportional to 1 + slope . (x - center)
  static Density affine(const Domain& domain, const Vector& slope);
  // proportional to 1 + amplitude * exp(-|x - c|^2 / (2 width^2))
  static Density bump(const Domain& domain, double amplitude, const Vector& center, double width);

  double operator()(const Eigen::Ref<const Vector>& x) const;

  const Domain& domain() const { return domain_; }
  DensityKind kind() const { return kind_; }
  bool is_constant() const { return kind_ == DensityKind::Constant; }
  double rho_min() const { return rho_min_; }
  double rho_max() const { return rho_max_; }
  double lipschitz() const { return lipschitz_; }
  double normalization() const { return scale_; }
  std::string describe() const;

  // integral of g over the domain by tensor (box) or polar (disk) Gauss rules
  template <typename F>
  double integrate(F&& g, int panels = 16) const;

 private:
  double raw(const Eigen::Ref<const Vector>& x) const;
  void finalize();

  Domain domain_;
  DensityKind kind_ = DensityKind::Constant;
  Vector slope_;
  Vector center_;
  double amplitude_ = 0.0;
  double width_ = 1.0;
  double scale_ = 1.0;
  double rho_min_ = 0.0, rho_max_ = 0.0, lipschitz_ = 0.0;
};

// n i.i.d. draws from rho by rejection against rho_max
PointSet sample_points(const Density& rho, Index n, std::uint64_t seed);


template <typename F>
double Density::integrate(F&& g, int panels) const {
  const int d = domain_.dim();
  const int m = 8;
  const GaussRule& rule = gauss_legendre(m);
  if (!domain_.is_box()) {
    const Vector c = domain_.center();
    const double R = domain_.radius();
    Vector x(2);
    auto over_r = [&](double r) {
      auto over_t = [&](double t) {
        x[0] = c[0] + r * std::cos(t);
        x[1] = c[1] + r * std::sin(t);
        return g(x);
      };
      return r * gp::integrate(over_t, 0.0, 2.0 * std::numbers::pi, 4 * panels, m);
    };
    return gp::integrate(over_r, 0.0, R, panels, m);
  }
  const Index per_axis = static_cast<Index>(panels) * m;
  std::vector<Vector> nodes(d), weights(d);
  for (int a = 0; a < d; ++a) {
    nodes[a].resize(per_axis);
    weights[a].resize(per_axis);
    const double lo = domain_.lower()[a];
    const double step = (domain_.upper()[a] - lo) / panels;
    for (int p = 0; p < panels; ++p)
      for (int i = 0; i < m; ++i) {
        nodes[a][p * m + i] = lo + p * step + 0.5 * step * (rule.nodes[i] + 1.0);
        weights[a][p * m + i] = 0.5 * step * rule.weights[i];
      }
  }
  Index total = 1;
  for (int a = 0; a < d; ++a) total *= per_axis;
  Vector x(d);
  double sum = 0.0;
  for (Index flat = 0; flat < total; ++flat) {
    Index rest = flat;
    double w = 1.0;
    for (int a = 0; a < d; ++a) {
      const Index i = rest % per_axis;
      rest /= per_axis;
      x[a] = nodes[a][i];
      w *= weights[a][i];
    }
    sum += w * g(x);
  }
  return sum;
}

}  // namespace gp
