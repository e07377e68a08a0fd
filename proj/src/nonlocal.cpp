#include "gp/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gp/quadrature.hpp"

namespace gp {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// angular intervals of the circle |y - x| = r lying inside a planar domain
std::vector<std::pair<double, double>> arcs_inside(const Domain& domain, const Vector& x, double r) {
  std::vector<double> cuts{0.0, two_pi};
  auto add = [&](double t) {
    t = std::fmod(t, two_pi);
    if (t < 0.0) t += two_pi;
    cuts.push_back(t);
  };
  if (domain.is_box()) {
    for (int a = 0; a < 2; ++a)
      for (double wall : {domain.lower()[a], domain.upper()[a]}) {
        const double c = (wall - x[a]) / r;
        if (std::abs(c) > 1.0) continue;
        if (a == 0) {
          add(std::acos(c));
          add(-std::acos(c));
        } else {
          add(std::asin(c));
          add(std::numbers::pi - std::asin(c));
        }
      }
  } else {
    const Vector off = x - domain.center();
    const double dist = off.norm();
    const double R = domain.radius();
    if (dist > 0.0) {
      const double q = (R * R - dist * dist - r * r) / (2.0 * r * dist);
      if (std::abs(q) <= 1.0) {
        const double phi = std::atan2(off[1], off[0]);
        add(phi + std::acos(q));
        add(phi - std::acos(q));
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> arcs;
  Vector y(2);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (hi - lo <= 0.0) continue;
    const double mid = 0.5 * (lo + hi);
    y[0] = x[0] + r * std::cos(mid);
    y[1] = x[1] + r * std::sin(mid);
    if (domain.contains(y)) arcs.emplace_back(lo, hi);
  }
  return arcs;
}

// radii in (0, eps) where the circle meets walls or corners
std::vector<double> radial_breaks(const Domain& domain, const Vector& x, double eps) {
  std::vector<double> br{0.0, eps};
  auto add = [&](double r) {
    if (r > 0.0 && r < eps) br.push_back(r);
  };
  const int d = domain.dim();
  if (domain.is_box()) {
    std::vector<std::vector<double>> gaps(d);
    for (int a = 0; a < d; ++a) {
      gaps[a] = {x[a] - domain.lower()[a], domain.upper()[a] - x[a]};
      for (double g : gaps[a]) add(g);
    }
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b)
        for (double ga : gaps[a])
          for (double gb : gaps[b]) {
            add(std::hypot(ga, gb));
            if (d == 3) {
              const int c = 3 - a - b;
              for (double gc : gaps[c]) add(std::sqrt(ga * ga + gb * gb + gc * gc));
            }
          }
  } else {
    const double dist = (x - domain.center()).norm();
    add(domain.radius() - dist);
    add(domain.radius() + dist);
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return br;
}

// int_a^b f(r) dr with the smoothstep substitution that absorbs sqrt endpoint behaviour
template <typename F>
double smooth_pieces(F&& f, const std::vector<double>& br, int panels, int m) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double a = br[i], b = br[i + 1];
    total += integrate(
        [&](double t) {
          const double r = a + (b - a) * t * t * (3.0 - 2.0 * t);
          return f(r) * (b - a) * 6.0 * t * (1.0 - t);
        },
        0.0, 1.0, panels, m);
  }
  return total;
}

}  // namespace

double rho_hat(const Density& rho, const KernelProfile& kernel, double eps, const Eigen::Ref<const Vector>& xr) {
  const Domain& domain = rho.domain();
  const Vector x = xr;
  if (!domain.contains(x)) throw std::invalid_argument("rho_hat: point outside the domain");
  if (kernel.dim() != domain.dim()) throw std::invalid_argument("rho_hat: dimension mismatch");
  const int d = domain.dim();
  Vector y(d);
  if (d == 1) {
    const double lo = std::max(domain.lower()[0], x[0] - eps), hi = std::min(domain.upper()[0], x[0] + eps);
    auto f = [&](double t) {
      y[0] = t;
      return kernel.scaled(std::abs(t - x[0]), eps) * rho(y);
    };
    return integrate(f, lo, x[0], 4, 16) + integrate(f, x[0], hi, 4, 16);
  }
  const std::vector<double> br = radial_breaks(domain, x, eps);
  if (d == 2) {
    auto ring = [&](double r) {
      if (r <= 0.0) return 0.0;
      double s = 0.0;
      for (const auto& [lo, hi] : arcs_inside(domain, x, r))
        s += integrate(
            [&](double t) {
              y[0] = x[0] + r * std::cos(t);
              y[1] = x[1] + r * std::sin(t);
              return rho(y);
            },
            lo, hi, 4, 16);
      return kernel.scaled(r, eps) * r * s;
    };
    return smooth_pieces(ring, br, 2, 24);
  }
  // d = 3: Gauss in cos(polar angle), uniform in azimuth, inside test per node
  const GaussRule& polar = gauss_legendre(64);
  const int azimuth = 128;
  auto shell = [&](double r) {
    if (r <= 0.0) return 0.0;
    double s = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double c = polar.nodes[i], sn = std::sqrt(1.0 - c * c);
      for (int j = 0; j < azimuth; ++j) {
        const double t = two_pi * (j + 0.5) / azimuth;
        y[0] = x[0] + r * sn * std::cos(t);
        y[1] = x[1] + r * sn * std::sin(t);
        y[2] = x[2] + r * c;
        if (domain.contains(y)) s += polar.weights[i] * (two_pi / azimuth) * rho(y);
      }
    }
    return kernel.scaled(r, eps) * r * r * s;
  };
  return smooth_pieces(shell, br, 1, 16);
}

LatticeFunction::LatticeFunction(Vector origin, double h, std::vector<Index> first, std::vector<Index> dims)
    : origin_(std::move(origin)), h_(h), first_(std::move(first)), dims_(std::move(dims)) {
  Index total = 1;
  for (Index n : dims_) total *= n;
  values_ = Vector::Zero(total);
  mass_ = Vector::Zero(total);
}

Vector LatticeFunction::center(Index flat) const {
  Vector c(dim());
  for (int a = 0; a < dim(); ++a) {
    const Index i = flat % dims_[a];
    flat /= dims_[a];
    c[a] = origin_[a] + (static_cast<double>(first_[a] + i) + 0.5) * h_;
  }
  return c;
}

double LatticeFunction::sample(const Eigen::Ref<const Vector>& x) const {
  const int d = dim();
  Index base[3];
  double frac[3];
  for (int a = 0; a < d; ++a) {
    const double t = (x[a] - origin_[a]) / h_ - 0.5 - static_cast<double>(first_[a]);
    const double fl = std::floor(t);
    base[a] = static_cast<Index>(fl);
    frac[a] = t - fl;
  }
  double sum = 0.0;
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1.0;
    Index flat = 0, stride = 1;
    bool inside = true;
    for (int a = 0; a < d; ++a) {
      const int bit = (corner >> a) & 1;
      const Index i = base[a] + bit;
      w *= bit ? frac[a] : 1.0 - frac[a];
      if (i < 0 || i >= dims_[a]) inside = false;
      flat += i * stride;
      stride *= dims_[a];
    }
    if (inside && w != 0.0) sum += w * values_[flat];
  }
  return sum;
}

Vector LatticeFunction::sample_all(const PointSet& pts) const {
  Vector out(pts.cols());
  for (Index i = 0; i < pts.cols(); ++i) out[i] = sample(pts.col(i));
  return out;
}

LatticeFunction repeated_average(const Density& rho, const KernelProfile& kernel, double eps,
                                 const Eigen::Ref<const Vector>& x0r, Index k, double h) {
  const Domain& domain = rho.domain();
  const Vector x0 = x0r;
  const int d = domain.dim();
  if (!domain.is_box()) throw std::invalid_argument("repeated_average: box domains only");
  if (kernel.dim() != d || x0.size() != d) throw std::invalid_argument("repeated_average: dimension mismatch");
  if (!(h > 0.0) || h > eps / 8.0) throw std::invalid_argument("repeated_average: grid too coarse (need h <= eps/8)");
  if (!domain.contains(x0) || domain.boundary_distance(x0) < eps)
    throw std::invalid_argument("repeated_average: x0 too close to the boundary");
  if (k < 0) throw std::invalid_argument("repeated_average: k must be nonnegative");

  const Vector& lo = domain.lower();
  const Vector& hi = domain.upper();
  std::vector<Index> cells(d);
  for (int a = 0; a < d; ++a) cells[a] = static_cast<Index>(std::ceil((hi[a] - lo[a]) / h - 1e-9));
  const Index s = static_cast<Index>(std::ceil(eps / h + std::sqrt(static_cast<double>(d))));
  const Index reach = (k + 1) * s + 1;
  std::vector<Index> first(d), dims(d), pdims(d), pstride(d);
  Index ptotal = 1;
  for (int a = 0; a < d; ++a) {
    const Index c = std::clamp<Index>(static_cast<Index>(std::floor((x0[a] - lo[a]) / h)), 0, cells[a] - 1);
    first[a] = std::max<Index>(0, c - reach);
    dims[a] = std::min<Index>(cells[a] - 1, c + reach) - first[a] + 1;
    pdims[a] = dims[a] + 2 * s;
    pstride[a] = ptotal;
    ptotal *= pdims[a];
  }

  const int sub = 8;
  const double sh = h / sub;
  Index sub_total = 1;
  for (int a = 0; a < d; ++a) sub_total *= sub;
  // cell average of eta_eps(|c + z|) over z in [-h/2, h/2]^d
  auto cell_avg = [&](const double* c) {
    double sum = 0.0;
    for (Index f = 0; f < sub_total; ++f) {
      Index rest = f;
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double z = c[a] - 0.5 * h + (static_cast<double>(rest % sub) + 0.5) * sh;
        rest /= sub;
        r2 += z * z;
      }
      sum += kernel.scaled(std::sqrt(r2), eps);
    }
    return sum / static_cast<double>(sub_total);
  };

  // stencil over offsets in [-s, s]^d, from |offset| so that it is exactly even
  const Index span = s + 1;
  Index abs_total = 1;
  for (int a = 0; a < d; ++a) abs_total *= span;
  Vector kabs(abs_total);
  double c[3];
  for (Index f = 0; f < abs_total; ++f) {
    Index rest = f;
    for (int a = 0; a < d; ++a) {
      c[a] = static_cast<double>(rest % span) * h;
      rest /= span;
    }
    kabs[f] = cell_avg(c);
  }
  std::vector<Index> offsets;
  std::vector<double> weights;
  const Index full = 2 * s + 1;
  Index full_total = 1;
  for (int a = 0; a < d; ++a) full_total *= full;
  for (Index f = 0; f < full_total; ++f) {
    Index rest = f, off = 0, aidx = 0, astride = 1;
    for (int a = 0; a < d; ++a) {
      const Index delta = rest % full - s;
      rest /= full;
      off += delta * pstride[a];
      aidx += std::abs(delta) * astride;
      astride *= span;
    }
    if (kabs[aidx] > 0.0) {
      offsets.push_back(off);
      weights.push_back(kabs[aidx]);
    }
  }

  // rho times clipped cell volume on the padded block
  Vector rho_vol = Vector::Zero(ptotal);
  std::vector<char> inner(ptotal, 0);
  Vector y(d);
  for (Index p = 0; p < ptotal; ++p) {
    Index rest = p;
    double vol = 1.0;
    bool in_domain = true, in_window = true;
    for (int a = 0; a < d; ++a) {
      const Index local = rest % pdims[a] - s;
      rest /= pdims[a];
      const Index g = first[a] + local;
      if (g < 0 || g >= cells[a]) {
        in_domain = false;
        break;
      }
      if (local < 0 || local >= dims[a]) in_window = false;
      const double a0 = lo[a] + static_cast<double>(g) * h;
      const double a1 = std::min(hi[a], a0 + h);
      vol *= a1 - a0;
      y[a] = 0.5 * (a0 + a1);
    }
    if (!in_domain) continue;
    rho_vol[p] = rho(y) * vol;
    inner[p] = in_window;
  }
  Vector hat = Vector::Zero(ptotal);
  for (Index p = 0; p < ptotal; ++p) {
    if (!inner[p]) continue;
    double sum = 0.0;
    for (std::size_t q = 0; q < offsets.size(); ++q) sum += weights[q] * rho_vol[p + offsets[q]];
    hat[p] = sum;
  }

  Vector phi = Vector::Zero(ptotal);
  for (Index p = 0; p < ptotal; ++p) {
    if (!inner[p]) continue;
    Index rest = p;
    for (int a = 0; a < d; ++a) {
      const Index local = rest % pdims[a] - s;
      rest /= pdims[a];
      c[a] = lo[a] + (static_cast<double>(first[a] + local) + 0.5) * h - x0[a];
    }
    phi[p] = cell_avg(c);
  }
  Vector psi(ptotal);
  for (Index it = 0; it < k; ++it) {
    psi.setZero();
    for (Index p = 0; p < ptotal; ++p)
      if (inner[p]) psi[p] = rho_vol[p] * phi[p] / hat[p];
    for (Index p = 0; p < ptotal; ++p) {
      if (!inner[p]) continue;
      double sum = 0.0;
      for (std::size_t q = 0; q < offsets.size(); ++q) sum += weights[q] * psi[p + offsets[q]];
      phi[p] = sum;
    }
  }

  LatticeFunction out(lo, h, first, dims);
  for (Index f = 0; f < out.size(); ++f) {
    Index rest = f, p = 0;
    for (int a = 0; a < d; ++a) {
      p += (rest % dims[a] + s) * pstride[a];
      rest /= dims[a];
    }
    out.values()[f] = phi[p];
    out.mass_weights()[f] = rho_vol[p];
  }
  return out;
}

}  // namespace gp
