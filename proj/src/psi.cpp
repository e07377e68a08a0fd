#include "gp/psi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <unsupported/Eigen/FFT>
#include <vector>

#include "gp/quadrature.hpp"

namespace gp {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

using Complex = std::complex<double>;

// in-place d-dimensional FFT on an N^d array stored with axis 0 fastest
void fft_nd(std::vector<Complex>& data, Index N, int d, bool inverse) {
  Eigen::FFT<double> fft;
  std::vector<Complex> line(N), out(N);
  Index stride = 1;
  for (int axis = 0; axis < d; ++axis) {
    const Index total = static_cast<Index>(data.size());
    for (Index base = 0; base < total; ++base) {
      if ((base / stride) % N != 0) continue;
      for (Index i = 0; i < N; ++i) line[i] = data[base + i * stride];
      if (inverse)
        fft.inv(out, line);
      else
        fft.fwd(out, line);
      for (Index i = 0; i < N; ++i) data[base + i * stride] = out[i];
    }
    stride *= N;
  }
}

// cell average of eta over [x - h/2, x + h/2]^d by midpoint subsampling
double cell_average(const KernelProfile& kernel, const double* x, double h, int d, int sub) {
  const double sh = h / sub;
  double sum = 0.0;
  Index count = 1;
  for (int a = 0; a < d; ++a) count *= sub;
  for (Index flat = 0; flat < count; ++flat) {
    Index rest = flat;
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double z = x[a] - 0.5 * h + (static_cast<double>(rest % sub) + 0.5) * sh;
      rest /= sub;
      r2 += z * z;
    }
    sum += kernel(std::sqrt(r2));
  }
  return sum / static_cast<double>(count);
}

double support_half_width(const KernelProfile& kernel, Index k) {
  const double spread = 10.0 * std::sqrt(kernel.sigma() * static_cast<double>(k));
  return std::min(static_cast<double>(k), spread) + 1.0;
}

RadialKernelTable psi_grid(const KernelProfile& kernel, Index k) {
  const int d = kernel.dim();
  if (d > 2) throw std::invalid_argument("psi: grid convolution supports d <= 2");
  const Index N = d == 1 ? (Index{1} << 16) : Index{2048};
  const double L = support_half_width(kernel, k);
  const double h = 2.0 * L / static_cast<double>(N);
  const int sub = d == 1 ? 64 : 16;
  Index total = 1;
  for (int a = 0; a < d; ++a) total *= N;
  std::vector<Complex> grid(total, Complex(0.0, 0.0));
  const Index reach = static_cast<Index>(std::ceil(1.0 / h + 1.0));
  double mass = 0.0;
  const Index span = 2 * reach + 1;
  Index box = 1;
  for (int a = 0; a < d; ++a) box *= span;
  double x[2];
  for (Index flat = 0; flat < box; ++flat) {
    Index rest = flat, idx = 0, stride = 1;
    for (int a = 0; a < d; ++a) {
      const Index off = rest % span - reach;
      rest /= span;
      x[a] = static_cast<double>(off) * h;
      idx += ((off % N + N) % N) * stride;
      stride *= N;
    }
    const double v = cell_average(kernel, x, h, d, sub);
    grid[idx] = v;
    mass += v;
  }
  const double cell = std::pow(h, d);
  mass *= cell;
  fft_nd(grid, N, d, false);
  for (auto& c : grid) c = std::pow(c * (cell / mass), static_cast<int>(k)) / cell;
  fft_nd(grid, N, d, true);
  const Index samples = static_cast<Index>(std::floor(std::min(static_cast<double>(k), L - 1.0) / h)) + 2;
  Vector values(std::min(samples, N / 2));
  for (Index i = 0; i < values.size(); ++i) values[i] = grid[i].real();
  return RadialKernelTable(d, k, 1.0, h, std::move(values), PsiMethod::GridConvolution);
}

RadialKernelTable psi_radial_fourier(const KernelProfile& kernel, Index k) {
  const double r_max = std::min(static_cast<double>(k), support_half_width(kernel, k) - 1.0);
  const FourierPsi psi(kernel, k, r_max);
  const Index samples = 513;
  const double step = r_max / static_cast<double>(samples - 1);
  Vector values(samples);
  for (Index i = 0; i < samples; ++i) values[i] = psi(static_cast<double>(i) * step);
  return RadialKernelTable(kernel.dim(), k, 1.0, step, std::move(values), PsiMethod::RadialFourier);
}

}  // namespace

std::string psi_method_name(PsiMethod m) {
  return m == PsiMethod::GridConvolution ? "grid-convolution" : "radial-fourier";
}

RadialKernelTable::RadialKernelTable(int d, Index k, double eps, double step, Vector values, PsiMethod method)
    : d_(d), k_(k), eps_(eps), step_(step), values_(std::move(values)), method_(method) {
  if (values_.size() < 2) throw std::invalid_argument("psi table: need at least two samples");
}

double RadialKernelTable::operator()(double r) const {
  r = std::abs(r);
  const double t = r / step_;
  const Index i = static_cast<Index>(std::floor(t));
  const Index last = values_.size() - 1;
  if (i >= last) return i == last && t == static_cast<double>(last) ? values_[last] : 0.0;
  auto at = [&](Index j) {
    if (j < 0) return values_[-j];
    if (j > last) return 0.0;
    return values_[j];
  };
  const double f = t - static_cast<double>(i);
  const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  // Catmull-Rom
  return p1 + 0.5 * f * (p2 - p0 + f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + f * (3.0 * (p1 - p2) + p3 - p0)));
}

double RadialKernelTable::mass_within(double t) const {
  t = std::min(t, r_max());
  if (t <= 0.0) return 0.0;
  const double area = sphere_area(d_);
  const Index full = static_cast<Index>(std::floor(t / step_));
  auto integrand = [&](double r) { return (*this)(r)*std::pow(r, d_ - 1); };
  double sum = 0.0;
  for (Index i = 0; i < full; ++i)
    sum += integrate(integrand, static_cast<double>(i) * step_, static_cast<double>(i + 1) * step_, 1, 4);
  const double rest = static_cast<double>(full) * step_;
  if (t > rest) sum += integrate(integrand, rest, t, 1, 4);
  return area * sum;
}

double eta_hat(const KernelProfile& kernel, double s) {
  s = std::abs(s);
  const int d = kernel.dim();
  if (s == 0.0) return 1.0;
  const double z = two_pi * s;
  if (kernel.kind() == KernelKind::Indicator) {
    switch (d) {
      case 1: return std::sin(z) / z;
      case 2: return 2.0 * std::cyl_bessel_j(1.0, z) / z;
      case 3: return 3.0 * (std::sin(z) - z * std::cos(z)) / (z * z * z);
    }
  }
  const int panels = std::max(32, static_cast<int>(std::ceil(2.0 * s)));
  switch (d) {
    case 1: return 2.0 * integrate([&](double r) { return kernel(r) * std::cos(z * r); }, 0.0, 1.0, panels);
    case 2:
      return two_pi * integrate([&](double r) { return kernel(r) * std::cyl_bessel_j(0.0, z * r) * r; }, 0.0, 1.0,
                                panels);
    case 3:
      return (2.0 / s) * integrate([&](double r) { return kernel(r) * r * std::sin(z * r); }, 0.0, 1.0, panels);
  }
  throw std::invalid_argument("eta_hat: unsupported dimension");
}

FourierPsi::FourierPsi(const KernelProfile& kernel, Index k, double r_max) : d_(kernel.dim()) {
  if (k < 1) throw std::invalid_argument("psi: k must be >= 1");
  const bool closed = kernel.kind() == KernelKind::Indicator;
  const double s_max = closed ? 4096.0 : 256.0;
  const double ds = 0.125;
  const Index count = static_cast<Index>(s_max / ds);
  // cutoff: start of the first run of count/8 samples with |hat eta|^k < 1e-14
  const Index run = count / 8;
  Index cut = -1, quiet = 0;
  for (Index i = 0; i <= count && cut < 0; ++i) {
    if (std::pow(std::abs(eta_hat(kernel, i * ds)), static_cast<double>(k)) < 1e-14) {
      if (++quiet == run) cut = i + 1 - run;
    } else {
      quiet = 0;
    }
  }
  if (cut < 0) throw std::runtime_error("psi: insufficient quadrature resolution");
  cutoff_ = std::max(1.0, static_cast<double>(cut) * ds);

  const double width = std::min(ds, 1.0 / (2.0 * std::max(r_max, 1.0)));
  const Index panels = static_cast<Index>(std::ceil(cutoff_ / width));
  const int m = 8;
  const GaussRule& rule = gauss_legendre(m);
  s_.resize(panels * m);
  w_.resize(panels * m);
  const double step = cutoff_ / static_cast<double>(panels);
  for (Index p = 0; p < panels; ++p)
    for (int i = 0; i < m; ++i) {
      const double s = (static_cast<double>(p) + 0.5 * (rule.nodes[i] + 1.0)) * step;
      s_[p * m + i] = s;
      w_[p * m + i] = 0.5 * step * rule.weights[i] * std::pow(eta_hat(kernel, s), static_cast<double>(k));
    }
}

double FourierPsi::operator()(double r) const {
  r = std::abs(r);
  double sum = 0.0;
  switch (d_) {
    case 1:
      for (Index i = 0; i < s_.size(); ++i) sum += w_[i] * std::cos(two_pi * r * s_[i]);
      return 2.0 * sum;
    case 2:
      for (Index i = 0; i < s_.size(); ++i) sum += w_[i] * std::cyl_bessel_j(0.0, two_pi * r * s_[i]) * s_[i];
      return two_pi * sum;
    case 3:
      if (r == 0.0) {
        for (Index i = 0; i < s_.size(); ++i) sum += w_[i] * s_[i] * s_[i];
        return 2.0 * two_pi * sum;
      }
      for (Index i = 0; i < s_.size(); ++i) sum += w_[i] * s_[i] * std::sin(two_pi * r * s_[i]);
      return 2.0 * sum / r;
  }
  throw std::invalid_argument("psi: unsupported dimension");
}

RadialKernelTable psi_table(const KernelProfile& kernel, Index k, double eps, std::optional<PsiMethod> method) {
  const int d = kernel.dim();
  if (d < 1 || d > 3) throw std::invalid_argument("psi: unsupported dimension");
  if (k < 1) throw std::invalid_argument("psi: k must be >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("psi: eps must be positive");
  const PsiMethod m = method.value_or(d <= 2 ? PsiMethod::GridConvolution : PsiMethod::RadialFourier);
  RadialKernelTable unit = [&] {
    if (k == 1) {
      const Index samples = 4097;
      Vector values(samples);
      const double step = 1.0 / static_cast<double>(samples - 1);
      for (Index i = 0; i < samples; ++i) values[i] = kernel(static_cast<double>(i) * step);
      return RadialKernelTable(d, 1, 1.0, step, std::move(values), m);
    }
    return m == PsiMethod::GridConvolution ? psi_grid(kernel, k) : psi_radial_fourier(kernel, k);
  }();
  return RadialKernelTable(d, k, eps, unit.step() * eps, unit.values() * kernel.scale_factor(eps), m);
}

double theta_dk(int d, Index k) {
  if (d == 1) return std::sqrt(static_cast<double>(k));
  if (d == 2) return std::log(static_cast<double>(k) + 1.0);
  return static_cast<double>(d) / (d - 2);
}

ScaleConstants scale_constants(int d, Index k, double eps) {
  if (d < 1 || d > 3) throw std::invalid_argument("scale constants: unsupported dimension");
  if (k < 1) throw std::invalid_argument("scale constants: k must be >= 1");
  const double eps_k = eps * std::sqrt(static_cast<double>(k));
  if (!(eps > 0.0) || eps > 0.5 || eps_k > 1.0)
    throw std::invalid_argument("scale constants: need 0 < eps <= 1/2 and eps sqrt(k) <= 1");
  ScaleConstants c;
  c.d = d;
  c.k = k;
  c.eps = eps;
  c.eps_k = eps_k;
  c.R_k = 5.0 * eps + eps_k * std::sqrt(8.0 * d * std::log(static_cast<double>(k) * std::pow(eps, -(d + 2))));
  c.theta = theta_dk(d, k);
  return c;
}

double ScaleConstants::phi(double z) const {
  const double excess = std::max(std::abs(z) - eps, 0.0);
  return std::min(theta, static_cast<double>(k) * std::exp(-excess * excess / (8.0 * d * eps_k * eps_k)));
}

}  // namespace gp
