#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gp/domain.hpp"
#include "gp/kernel.hpp"
#include "gp/poisson.hpp"

namespace gp {

enum class KRule { Explicit, Nonconstant, Constant };
enum class NRule { Explicit, Inverse };

struct ExperimentConfig {
  std::string name = "converge";
  int d = 2;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::uint64_t master_seed = 20240531;
  std::string output = "out";
  int threads = 0;  // 0: hardware concurrency
  bool timing = true;

  std::string domain_type = "box";
  Vector lower, upper, domain_center;
  double radius = 1.0;

  std::string density_type = "constant";
  Vector slope, bump_center;
  double amplitude = 1.0, width = 0.2;

  KernelKind kernel = KernelKind::Cone;
  SourceSpec sources;

  std::vector<double> eps;
  std::vector<Index> n;
  NRule n_rule = NRule::Explicit;
  double n_constant = 1.0;
  Index n_max = 100000;
  KRule k_rule = KRule::Explicit;
  std::vector<Index> k;
  double sigma = 0.1;

  double tol = 1e-10;
  double reference_h = 0.0;  // 0: largest power of two not above eps_min / 10
  int drop_largest = 0;

  Vector center;  // heat center
  std::vector<Vector> labels;
  std::vector<double> label_values;

  // points of the main ladder: the eps list, or the n list at a single eps
  std::size_t ladder_size() const;
  double eps_at(std::size_t point) const { return eps.size() == 1 ? eps[0] : eps.at(point); }

  Domain make_domain() const;
  Density make_density() const;
  // keys in section.key form with canonical string values
  std::map<std::string, std::string> resolved() const;
};

// overrides use section.key names, e.g. {"ladder.eps", "0.2,0.1"}
ExperimentConfig load_config(const std::string& path, const std::map<std::string, std::string>& overrides = {});
ExperimentConfig parse_config(const std::string& ini_text, const std::map<std::string, std::string>& overrides = {});
// defaults for a named experiment before any file is applied
ExperimentConfig default_config(const std::string& name, int d);

// shortest round-trip decimal
std::string format_number(double x);

Index n_for(const ExperimentConfig& c, std::size_t point);
Index k_for(const ExperimentConfig& c, std::size_t point);

}  // namespace gp
