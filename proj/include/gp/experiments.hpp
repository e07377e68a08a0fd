#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gp/config.hpp"
#include "gp/continuum.hpp"
#include "gp/graph.hpp"

namespace gp {

struct RateRecord {
  std::string experiment;
  int d = 0;
  Index n = 0;
  double eps = 0.0;
  Index k = 0;
  std::uint64_t seed = 0;
  double l1_error = 0.0;
  double moll_error = 0.0;
  double slope = 0.0;
  double runtime_s = 0.0;
  std::string status = "ok";
  std::map<std::string, bool> checks;
};

struct SummaryRow {
  Index n = 0;
  double eps = 0.0;
  Index k = 0;
  int trials = 0;
  double median_l1 = 0.0, q1_l1 = 0.0, q3_l1 = 0.0;
  double median_moll = 0.0, q1_moll = 0.0, q3_moll = 0.0;
};

struct SlopeFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  int points = 0;
};

struct DemoOutcome {
  std::uint64_t seed = 0;
  PointSet points;
  Vector laplace, poisson, pwll;
  std::vector<Index> labeled;
  double spike = 0.0;          // unlabeled Laplace values within 0.05 gap of the median
  double laplace_band = 0.0;   // width of that window
  double laplace_iqr = 0.0;
  double poisson_iqr = 0.0;
  double poisson_mean = 0.0;   // degree-weighted
  bool laplace_extrema_at_labels = false;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RateRecord> records;
  std::vector<SummaryRow> summary;
  SlopeFit fit;
  // one entry per ladder point: regime and margin checks as booleans
  std::vector<std::map<std::string, bool>> point_checks;
  std::vector<DemoOutcome> demo;
};

// least squares slope of log y against log x; NaN slope when fewer than min_points
SlopeFit fit_log_slope(const std::vector<double>& x, const std::vector<double>& y, int min_points = 4);
double median(std::vector<double> v);
// first and third quartiles, linear interpolation between order statistics
std::pair<double, double> quartiles(std::vector<double> v);

std::uint64_t job_seed(std::uint64_t master, std::uint64_t seed, std::uint64_t job);
// runs fn(0..count-1) on a pool of worker threads
void run_jobs(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

// sum_x a_x G^x scaled to the graph normalization of L_{n,eps}
GridFunction continuum_reference(const ExperimentConfig& c);
// reference_h, or the largest power of two not above eps_min / 10 (eps_min / 100 in d = 1)
double reference_step(const ExperimentConfig& c);

ExperimentResult run_convergence(const ExperimentConfig& c);
ExperimentResult run_mollification_rate(const ExperimentConfig& c);
ExperimentResult run_heat_asymptotics(const ExperimentConfig& c);
ExperimentResult demo_two_point(const ExperimentConfig& c);
ExperimentResult run_experiment(const ExperimentConfig& c);

// results.csv, summary.csv, checks.csv, meta.txt (and fields for the demo) under c.output
void write_outputs(const ExperimentResult& r);

}  // namespace gp
