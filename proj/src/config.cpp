#include "gp/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gp {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

namespace pt = boost::property_tree;

std::string fmt(double x) { return format_number(x); }

template <class T>
std::string join(const std::vector<T>& v, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    if constexpr (std::is_floating_point_v<T>) out += fmt(v[i]);
    else out += std::to_string(v[i]);
  }
  return out;
}

std::string join_vec(const Vector& v) { return join(std::vector<double>(v.data(), v.data() + v.size())); }

std::string join_points(const std::vector<Vector>& pts) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) out += (i ? "; " : "") + join_vec(pts[i]);
  return out;
}

double to_double(const std::string& key, std::string s) {
  boost::trim(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::invalid_argument("config " + key + ": not a number: '" + s + "'");
  return v;
}

std::vector<double> doubles(const std::string& key, const std::string& s) {
  std::vector<std::string> parts;
  boost::split(parts, s, boost::is_any_of(","));
  std::vector<double> out;
  for (const auto& p : parts)
    if (!boost::trim_copy(p).empty()) out.push_back(to_double(key, p));
  return out;
}

template <class T>
std::vector<T> integers(const std::string& key, const std::string& s) {
  std::vector<T> out;
  for (double v : doubles(key, s)) {
    if (v != std::floor(v) || v < 0) throw std::invalid_argument("config " + key + ": expected nonnegative integers");
    out.push_back(static_cast<T>(v));
  }
  return out;
}

Vector vec(const std::string& key, const std::string& s) {
  const auto v = doubles(key, s);
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

std::vector<Vector> points(const std::string& key, const std::string& s) {
  std::vector<std::string> parts;
  boost::split(parts, s, boost::is_any_of(";"));
  std::vector<Vector> out;
  for (const auto& p : parts)
    if (!boost::trim_copy(p).empty()) out.push_back(vec(key, p));
  return out;
}

bool boolean(const std::string& key, std::string s) {
  boost::to_lower(s);
  boost::trim(s);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::invalid_argument("config " + key + ": expected a boolean");
}

void apply(ExperimentConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = boost::trim_copy(raw);
  if (key == "experiment.name") c.name = v;
  else if (key == "experiment.d") c.d = static_cast<int>(to_double(key, v));
  else if (key == "experiment.seeds") c.seeds = integers<std::uint64_t>(key, v);
  else if (key == "experiment.master_seed") c.master_seed = integers<std::uint64_t>(key, v).at(0);
  else if (key == "experiment.output") c.output = v;
  else if (key == "experiment.threads") c.threads = static_cast<int>(to_double(key, v));
  else if (key == "experiment.timing") c.timing = boolean(key, v);
  else if (key == "domain.type") c.domain_type = v;
  else if (key == "domain.lower") c.lower = vec(key, v);
  else if (key == "domain.upper") c.upper = vec(key, v);
  else if (key == "domain.center") c.domain_center = vec(key, v);
  else if (key == "domain.radius") c.radius = to_double(key, v);
  else if (key == "density.type") c.density_type = v;
  else if (key == "density.slope") c.slope = vec(key, v);
  else if (key == "density.amplitude") c.amplitude = to_double(key, v);
  else if (key == "density.center") c.bump_center = vec(key, v);
  else if (key == "density.width") c.width = to_double(key, v);
  else if (key == "kernel.type") c.kernel = parse_kernel(v);
  else if (key == "sources.anchors") c.sources.anchors = points(key, v);
  else if (key == "sources.coefficients") c.sources.coefficients = vec(key, v);
  else if (key == "ladder.eps") c.eps = doubles(key, v);
  else if (key == "ladder.n") c.n = integers<Index>(key, v);
  else if (key == "ladder.n_rule") {
    if (v == "explicit") c.n_rule = NRule::Explicit;
    else if (v == "inverse") c.n_rule = NRule::Inverse;
    else throw std::invalid_argument("config ladder.n_rule: expected explicit or inverse");
  } else if (key == "ladder.n_constant") c.n_constant = to_double(key, v);
  else if (key == "ladder.n_max") c.n_max = integers<Index>(key, v).at(0);
  else if (key == "ladder.k_rule") {
    if (v == "explicit") c.k_rule = KRule::Explicit;
    else if (v == "nonconstant") c.k_rule = KRule::Nonconstant;
    else if (v == "constant") c.k_rule = KRule::Constant;
    else throw std::invalid_argument("config ladder.k_rule: expected explicit, nonconstant or constant");
  } else if (key == "ladder.k") c.k = integers<Index>(key, v);
  else if (key == "ladder.sigma") c.sigma = to_double(key, v);
  else if (key == "solver.tol") c.tol = to_double(key, v);
  else if (key == "solver.reference_h") c.reference_h = to_double(key, v);
  else if (key == "fit.drop_largest") c.drop_largest = static_cast<int>(to_double(key, v));
  else if (key == "heat.center") c.center = vec(key, v);
  else if (key == "demo.labels") c.labels = points(key, v);
  else if (key == "demo.values") c.label_values = doubles(key, v);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

void check(const ExperimentConfig& c) {
  static const std::set<std::string> names{"converge", "mollify", "heat-asymptotics", "demo"};
  if (!names.count(c.name)) throw std::invalid_argument("config: unknown experiment '" + c.name + "'");
  if (c.d < 1 || c.d > 3) throw std::invalid_argument("config: d must be 1, 2 or 3");
  if (c.seeds.empty()) throw std::invalid_argument("config: at least one seed is required");
  if (c.eps.empty()) throw std::invalid_argument("config: empty eps ladder");
  for (std::size_t i = 1; i < c.eps.size(); ++i)
    if (!(c.eps[i] < c.eps[i - 1])) throw std::invalid_argument("config: eps ladder must be decreasing");
  for (double e : c.eps)
    if (!(e > 0.0 && e <= 1.0)) throw std::invalid_argument("config: eps must lie in (0, 1]");
  if (c.n_rule == NRule::Explicit && c.n.empty()) throw std::invalid_argument("config: ladder.n is empty");
  if (c.n_rule == NRule::Explicit && c.n.size() > 1 && c.eps.size() > 1 && c.n.size() != c.eps.size())
    throw std::invalid_argument("config: ladder.n needs one entry or one per eps");
  if (c.k_rule == KRule::Explicit && c.k.empty()) throw std::invalid_argument("config: ladder.k is empty");
  if (c.name != "mollify" && c.k_rule == KRule::Explicit && c.k.size() != 1 && c.k.size() != c.ladder_size())
    throw std::invalid_argument("config: ladder.k needs one entry or one per ladder point");
  if (!(c.tol > 0.0)) throw std::invalid_argument("config: tolerance must be positive");
  if (c.sigma <= 0.0 || c.sigma >= 1.0) throw std::invalid_argument("config: sigma must lie in (0, 1)");
  if (c.drop_largest < 0) throw std::invalid_argument("config: drop_largest must be nonnegative");
  if (c.name == "demo" && (c.labels.size() != 2 || c.label_values.size() != 2))
    throw std::invalid_argument("config: demo needs two labels and two values");
  if (c.name == "heat-asymptotics" && c.center.size() != c.d) throw std::invalid_argument("config: heat.center dimension");
  c.make_density();
  if (c.name == "converge" || c.name == "mollify") {
    const Domain dom = c.make_domain();
    c.sources.validate(&dom);
  }
}

}  // namespace

std::size_t ExperimentConfig::ladder_size() const {
  if (eps.size() == 1 && n_rule == NRule::Explicit) return std::max<std::size_t>(1, n.size());
  return eps.size();
}

Domain ExperimentConfig::make_domain() const {
  if (domain_type == "box") {
    if (lower.size() != d || upper.size() != d) throw std::invalid_argument("config: domain bounds dimension");
    return Domain::box(lower, upper);
  }
  if (domain_type == "disk") return Domain::disk(domain_center, radius);
  throw std::invalid_argument("config: unknown domain type '" + domain_type + "'");
}

Density ExperimentConfig::make_density() const {
  const Domain dom = make_domain();
  if (density_type == "constant") return Density::constant(dom);
  if (density_type == "affine") return Density::affine(dom, slope);
  if (density_type == "bump") return Density::bump(dom, amplitude, bump_center, width);
  throw std::invalid_argument("config: unknown density type '" + density_type + "'");
}

std::map<std::string, std::string> ExperimentConfig::resolved() const {
  std::map<std::string, std::string> m;
  m["experiment.name"] = name;
  m["experiment.d"] = std::to_string(d);
  m["experiment.seeds"] = join(seeds);
  m["experiment.master_seed"] = std::to_string(master_seed);
  m["experiment.output"] = output;
  m["experiment.threads"] = std::to_string(threads);
  m["experiment.timing"] = timing ? "true" : "false";
  m["domain.type"] = domain_type;
  if (domain_type == "box") {
    m["domain.lower"] = join_vec(lower);
    m["domain.upper"] = join_vec(upper);
  } else {
    m["domain.center"] = join_vec(domain_center);
    m["domain.radius"] = fmt(radius);
  }
  m["density.type"] = density_type;
  if (density_type == "affine") m["density.slope"] = join_vec(slope);
  if (density_type == "bump") {
    m["density.amplitude"] = fmt(amplitude);
    m["density.center"] = join_vec(bump_center);
    m["density.width"] = fmt(width);
  }
  m["kernel.type"] = kernel_name(kernel);
  m["sources.anchors"] = join_points(sources.anchors);
  m["sources.coefficients"] = join_vec(sources.coefficients);
  m["ladder.eps"] = join(eps);
  m["ladder.n_rule"] = n_rule == NRule::Explicit ? "explicit" : "inverse";
  m["ladder.n"] = join(n);
  m["ladder.n_constant"] = fmt(n_constant);
  m["ladder.n_max"] = std::to_string(n_max);
  m["ladder.k_rule"] = k_rule == KRule::Explicit ? "explicit" : k_rule == KRule::Nonconstant ? "nonconstant" : "constant";
  m["ladder.k"] = join(k);
  m["ladder.sigma"] = fmt(sigma);
  m["solver.tol"] = fmt(tol);
  m["solver.reference_h"] = fmt(reference_h);
  m["fit.drop_largest"] = std::to_string(drop_largest);
  if (center.size()) m["heat.center"] = join_vec(center);
  if (!labels.empty()) {
    m["demo.labels"] = join_points(labels);
    m["demo.values"] = join(label_values);
  }
  return m;
}

ExperimentConfig default_config(const std::string& name, int d) {
  ExperimentConfig c;
  c.name = name;
  c.d = d;
  c.output = "out/" + name;
  c.lower = Vector::Zero(d);
  c.upper = Vector::Ones(d);
  c.slope = Vector::Zero(d);
  c.bump_center = Vector::Constant(d, 0.5);
  Vector p = Vector::Constant(d, 0.5), q = Vector::Constant(d, 0.5);
  p[0] = 0.3;
  q[0] = 0.7;
  c.sources.anchors = {p, q};
  c.sources.coefficients = Eigen::Vector2d(1.0, -1.0);
  if (name == "converge") {
    c.eps = {0.2, 0.14, 0.1, 0.07, 0.05};
    c.n_rule = NRule::Inverse;
    c.n_max = 20000;
    c.k_rule = KRule::Constant;
  } else if (name == "mollify") {
    c.eps = {0.05};
    c.n = {20000};
    c.k = {4, 16, 64, 256};
  } else if (name == "heat-asymptotics") {
    c.eps = {0.25};
    c.n = {10000, 40000};
    c.k = {16};
    c.upper = Vector::Constant(d, 28.0);
    c.center = Vector::Constant(d, 14.0);
    c.sources = {};
  } else if (name == "demo") {
    c.seeds = {1};
    c.eps = {d == 1 ? 0.01 : 0.1};
    c.n = {10000};
    c.k = {1};
    c.labels = {p, q};
    c.label_values = {1.0, -1.0};
    c.sources = {};
  }
  return c;
}

ExperimentConfig parse_config(const std::string& ini_text, const std::map<std::string, std::string>& overrides) {
  pt::ptree tree;
  std::istringstream in(ini_text);
  pt::read_ini(in, tree);
  std::string name = "converge";
  int d = 2;
  if (auto v = tree.get_optional<std::string>("experiment.name")) name = boost::trim_copy(*v);
  if (auto v = tree.get_optional<std::string>("experiment.d")) d = static_cast<int>(to_double("experiment.d", *v));
  if (auto it = overrides.find("experiment.name"); it != overrides.end()) name = it->second;
  if (auto it = overrides.find("experiment.d"); it != overrides.end()) d = static_cast<int>(to_double(it->first, it->second));
  if (d < 1 || d > 3) throw std::invalid_argument("config: d must be 1, 2 or 3");
  ExperimentConfig c = default_config(name, d);
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw std::invalid_argument("config: key outside a section: " + section);
    for (const auto& [key, value] : body) apply(c, section + "." + key, value.data());
  }
  for (const auto& [key, value] : overrides) apply(c, key, value);
  check(c);
  return c;
}

ExperimentConfig load_config(const std::string& path, const std::map<std::string, std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

namespace {

// eps >= C (log n / n)^q
double n_exponent(const ExperimentConfig& c) {
  const double d = c.d;
  if (c.make_density().is_constant()) {
    if (c.d == 1) return (d + 4) / (3 * d * d + 13 * d + 10);
    return (d + 4) / (3 * d * d + 12 * d + 6);
  }
  if (c.d == 1) return (d + 2) / (3 * d * d + 7 * d + 4);
  return (d + 2) / (3 * d * d + 6 * d + 2);
}

}  // namespace

Index n_for(const ExperimentConfig& c, std::size_t point) {
  if (c.n_rule == NRule::Explicit) return c.n.size() == 1 ? c.n[0] : c.n.at(point);
  const double q = n_exponent(c);
  const double target = std::pow(c.eps_at(point) / c.n_constant, 1.0 / q);
  auto ok = [&](double n) { return std::log(n) / n <= target; };
  double lo = 3.0, hi = 3.0;
  while (!ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > static_cast<double>(c.n_max)) return c.n_max;
  }
  while (hi - lo > 1.0) {
    const double mid = std::floor(0.5 * (lo + hi));
    (ok(mid) ? hi : lo) = mid;
  }
  return std::min(c.n_max, static_cast<Index>(hi));
}

Index k_for(const ExperimentConfig& c, std::size_t point) {
  const double eps = c.eps_at(point), d = c.d;
  double k = 0.0;
  switch (c.k_rule) {
    case KRule::Explicit: return c.k.size() == 1 ? c.k[0] : c.k.at(point);
    case KRule::Nonconstant: k = std::pow(eps, -2.0 * (d + 1) / (d + 2)); break;
    case KRule::Constant: k = std::pow(eps, -2.0 * (d + 3) / (d + 4)); break;
  }
  const Index cap = static_cast<Index>(std::floor(1.0 / (eps * eps) + 1e-9));
  return std::clamp<Index>(static_cast<Index>(std::llround(k)), 2, std::max<Index>(cap, 2));
}

}  // namespace gp
