#include "gp/domain.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace gp {

Domain Domain::box(const Vector& lower, const Vector& upper) {
  if (lower.size() != upper.size() || lower.size() < 1 || lower.size() > 3)
    throw std::invalid_argument("box: unsupported dimension");
  if ((upper.array() <= lower.array()).any()) throw std::invalid_argument("box: empty side");
  Domain out;
  out.lower_ = lower;
  out.upper_ = upper;
  return out;
}

Domain Domain::unit_box(int d) { return box(Vector::Zero(d), Vector::Ones(d)); }

Domain Domain::disk(const Vector& center, double radius) {
  if (center.size() != 2) throw std::invalid_argument("disk: only d = 2 is supported");
  if (!(radius > 0.0)) throw std::invalid_argument("disk: radius must be positive");
  Domain out;
  out.lower_ = center.array() - radius;
  out.upper_ = center.array() + radius;
  out.disk_ = true;
  out.radius_ = radius;
  return out;
}

bool Domain::contains(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != dim()) return false;
  if (disk_) return (x - center()).norm() < radius_;
  return (x.array() > lower_.array()).all() && (x.array() < upper_.array()).all();
}

double Domain::volume() const {
  if (disk_) return std::numbers::pi * radius_ * radius_;
  return (upper_ - lower_).prod();
}

double Domain::boundary_distance(const Eigen::Ref<const Vector>& x) const {
  if (disk_) return radius_ - (x - center()).norm();
  return std::min((x - lower_).minCoeff(), (upper_ - x).minCoeff());
}

std::string Domain::describe() const {
  std::ostringstream os;
  if (disk_) {
    os << "disk(" << center().transpose() << "; r=" << radius_ << ")";
  } else {
    os << "box(" << lower_.transpose() << " | " << upper_.transpose() << ")";
  }
  return os.str();
}

namespace {

// corners of the bounding box
std::vector<Vector> corners(const Domain& domain) {
  const int d = domain.dim();
  std::vector<Vector> out;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Vector c(d);
    for (int a = 0; a < d; ++a) c[a] = (mask >> a) & 1 ? domain.upper()[a] : domain.lower()[a];
    out.push_back(c);
  }
  return out;
}

}  // namespace

Density Density::constant(const Domain& domain) {
  Density rho;
  rho.domain_ = domain;
  rho.kind_ = DensityKind::Constant;
  rho.finalize();
  return rho;
}

Density Density::affine(const Domain& domain, const Vector& slope) {
  if (slope.size() != domain.dim()) throw std::invalid_argument("affine density: slope dimension mismatch");
  Density rho;
  rho.domain_ = domain;
  rho.kind_ = DensityKind::Affine;
  rho.slope_ = slope;
  rho.center_ = domain.center();
  rho.finalize();
  return rho;
}

Density Density::bump(const Domain& domain, double amplitude, const Vector& center, double width) {
  if (center.size() != domain.dim()) throw std::invalid_argument("bump density: center dimension mismatch");
  if (!(width > 0.0) || !(amplitude > -1.0)) throw std::invalid_argument("bump density: invalid parameters");
  Density rho;
  rho.domain_ = domain;
  rho.kind_ = DensityKind::Bump;
  rho.amplitude_ = amplitude;
  rho.center_ = center;
  rho.width_ = width;
  rho.finalize();
  return rho;
}

double Density::raw(const Eigen::Ref<const Vector>& x) const {
  switch (kind_) {
    case DensityKind::Constant: return 1.0;
    case DensityKind::Affine: return 1.0 + slope_.dot(x - center_);
    case DensityKind::Bump:
      return 1.0 + amplitude_ * std::exp(-(x - center_).squaredNorm() / (2.0 * width_ * width_));
  }
  return 0.0;
}

double Density::operator()(const Eigen::Ref<const Vector>& x) const { return scale_ * raw(x); }

void Density::finalize() {
  double lo = 1.0, hi = 1.0, lip = 0.0;
  if (kind_ == DensityKind::Affine) {
    if (domain_.is_box()) {
      lo = hi = raw(domain_.lower());
      for (const Vector& c : corners(domain_)) {
        lo = std::min(lo, raw(c));
        hi = std::max(hi, raw(c));
      }
    } else {
      lo = 1.0 - slope_.norm() * domain_.radius();
      hi = 1.0 + slope_.norm() * domain_.radius();
    }
    lip = slope_.norm();
  } else if (kind_ == DensityKind::Bump) {
    double far = 0.0;
    for (const Vector& c : corners(domain_)) far = std::max(far, (c - center_).norm());
    const double tail = std::exp(-far * far / (2.0 * width_ * width_));
    lo = amplitude_ >= 0.0 ? 1.0 + amplitude_ * tail : 1.0 + amplitude_;
    hi = amplitude_ >= 0.0 ? 1.0 + amplitude_ : 1.0 + amplitude_ * tail;
    lip = std::abs(amplitude_) / (width_ * std::sqrt(std::exp(1.0)));
  }
  if (!(lo > 0.0)) throw std::invalid_argument("density must be bounded below by a positive constant");
  scale_ = 1.0;
  const double mass = integrate([&](const Vector& x) { return raw(x); });
  scale_ = 1.0 / mass;
  rho_min_ = scale_ * lo;
  rho_max_ = scale_ * hi;
  lipschitz_ = scale_ * lip;
}

std::string Density::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case DensityKind::Constant: os << "constant"; break;
    case DensityKind::Affine: os << "affine(slope=" << slope_.transpose() << ")"; break;
    case DensityKind::Bump:
      os << "bump(amplitude=" << amplitude_ << ", center=" << center_.transpose() << ", width=" << width_ << ")";
      break;
  }
  return os.str();
}

PointSet sample_points(const Density& rho, Index n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_points: need n >= 2");
  const Domain& domain = rho.domain();
  const int d = domain.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointSet pts(d, n);
  Vector x(d);
  Index accepted = 0, attempts = 0;
  while (accepted < n) {
    ++attempts;
    for (int a = 0; a < d; ++a) x[a] = domain.lower()[a] + (domain.upper()[a] - domain.lower()[a]) * unit(rng);
    const double u = unit(rng);
    if (domain.contains(x) && u * rho.rho_max() < rho(x)) pts.col(accepted++) = x;
    if (attempts >= 100000 && accepted < 1e-3 * attempts)
      throw std::runtime_error("sample_points: rejection acceptance rate below 1e-3");
  }
  return pts;
}

}  // namespace gp
