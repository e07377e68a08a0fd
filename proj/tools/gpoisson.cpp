#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gp/config.hpp"
#include "gp/continuum.hpp"
#include "gp/experiments.hpp"
#include "gp/graph.hpp"
#include "gp/heat.hpp"
#include "gp/poisson.hpp"
#include "gp/psi.hpp"

using namespace gp;

namespace {

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
  return row;
}

// rows "x0,...,x{d-1},a"; a non-numeric first line is a header
SourceSpec read_sources(const std::string& path, int d) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  SourceSpec s;
  std::vector<double> a;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    try {
      row = parse_row(line);
    } catch (const std::invalid_argument&) {
      if (first) {
        first = false;
        continue;
      }
      throw std::invalid_argument("sources: bad row '" + line + "'");
    }
    first = false;
    if (static_cast<int>(row.size()) != d + 1) throw std::invalid_argument("sources: expected d + 1 columns");
    s.anchors.push_back(Eigen::Map<const Vector>(row.data(), d));
    a.push_back(row[d]);
  }
  s.coefficients = Eigen::Map<const Vector>(a.data(), static_cast<Index>(a.size()));
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

struct Geometry {
  int d = 2;
  std::string domain = "box";
  std::string density = "constant";
};

void add_geometry(CLI::App* app, Geometry& g) {
  app->add_option("--d", g.d, "dimension")->check(CLI::Range(1, 3));
  app->add_option("--domain", g.domain, "box or disk")->check(CLI::IsMember({"box", "disk"}));
  app->add_option("--density", g.density, "constant, bump or affine")->check(CLI::IsMember({"constant", "bump", "affine"}));
}

Density make_density(const Geometry& g) {
  ExperimentConfig c = default_config("demo", g.d);
  c.domain_type = g.domain;
  c.domain_center = Vector::Constant(g.d, 0.5);
  c.radius = 0.5;
  c.density_type = g.density;
  if (g.density == "affine") c.slope = Vector::Constant(g.d, 0.5);
  return c.make_density();
}

void write_vector(const std::string& path, const Vector& v) {
  auto out = open_out(path);
  out << "node,value\n";
  for (Index i = 0; i < v.size(); ++i) out << i << ',' << format_number(v[i]) << '\n';
}

std::map<std::string, std::string> overrides_from(const std::vector<std::string>& extras) {
  std::map<std::string, std::string> m;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    std::string key = extras[i];
    if (key.rfind("--", 0) != 0) throw std::invalid_argument("unexpected argument '" + key + "'");
    key = key.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) throw std::invalid_argument("missing value for --" + key);
      value = extras[++i];
    }
    m[key] = value;
  }
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson learning on random geometric graphs"};
  app.require_subcommand(1);

  Geometry geo;
  Index n = 1000;
  double eps = 0.1;
  std::string kernel = "cone";
  std::uint64_t seed = 1;
  std::string out;
  auto* graph = app.add_subcommand("graph", "sample points and build an eps-graph");
  add_geometry(graph, geo);
  graph->add_option("--n", n)->check(CLI::PositiveNumber);
  graph->add_option("--eps", eps)->check(CLI::PositiveNumber);
  graph->add_option("--kernel", kernel)->check(CLI::IsMember({"indicator", "cone", "bump"}));
  graph->add_option("--seed", seed);
  graph->add_option("--out", out, "edge list; points go to <out>.points.csv")->required();

  std::string graph_file, sources_file;
  double tol = 1e-10;
  auto* solve = app.add_subcommand("solve", "graph Poisson solve");
  solve->add_option("--graph", graph_file)->required();
  solve->add_option("--sources", sources_file, "csv rows x...,a")->required();
  solve->add_option("--tol", tol)->check(CLI::PositiveNumber);
  solve->add_option("--out", out)->required();

  std::string center;
  Index k = 1;
  auto* heat = app.add_subcommand("heat", "graph heat-kernel column");
  heat->add_option("--graph", graph_file)->required();
  heat->add_option("--center", center, "node index or comma separated point")->required();
  heat->add_option("--k", k)->check(CLI::NonNegativeNumber);
  heat->add_option("--out", out)->required();

  int psi_d = 2;
  auto* psi = app.add_subcommand("psi", "radial table of the k-fold kernel convolution");
  psi->add_option("--d", psi_d)->check(CLI::Range(1, 3));
  psi->add_option("--k", k)->check(CLI::PositiveNumber);
  psi->add_option("--eps", eps)->check(CLI::PositiveNumber);
  psi->add_option("--kernel", kernel)->check(CLI::IsMember({"indicator", "cone", "bump"}));
  psi->add_option("--out", out)->required();

  double h = 1.0 / 128;
  auto* continuum = app.add_subcommand("continuum", "grid solve of -div(rho^2 grad u) = f");
  continuum->set_help_flag("--help", "Print this help message and exit");
  add_geometry(continuum, geo);
  continuum->add_option("--h", h)->check(CLI::PositiveNumber);
  continuum->add_option("--sources", sources_file, "csv rows x...,a")->required();
  continuum->add_option("--tol", tol)->check(CLI::PositiveNumber);
  continuum->add_option("--out", out)->required();

  std::string config_file;
  std::vector<CLI::App*> experiments;
  for (const char* name : {"converge", "mollify", "heat-asymptotics", "demo"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_file, "INI file");
    sub->allow_extras();
    sub->footer("Any config key may be overridden with --section.key value.");
    experiments.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*graph) {
      const KernelProfile kp = make_kernel(parse_kernel(kernel), geo.d);
      const Graph g = build_graph(sample_points(make_density(geo), n, seed), eps, kp);
      save_graph(g, out, seed);
      std::cout << "nodes " << g.size() << " edges " << g.edge_count() << (g.connected() ? "" : " (disconnected)") << '\n';
    } else if (*solve) {
      const Graph g = load_graph(graph_file);
      SolveOptions opts;
      opts.tol = tol;
      const auto [u, rep] = solve_graph_poisson(g, read_sources(sources_file, g.dim()), opts);
      write_vector(out, u.values());
      std::cout << "iterations " << rep.iterations << " residual " << format_number(rep.residual) << '\n';
    } else if (*heat) {
      const Graph g = load_graph(graph_file);
      const std::vector<double> c = parse_row(center);
      // a bare integer names a node, anything else is a point
      const bool is_node = center.find_first_of(".,eE") == std::string::npos && c.size() == 1;
      const HeatCenter hc = is_node ? HeatCenter::at_node(static_cast<Index>(c[0]))
                                    : HeatCenter::at_point(Eigen::Map<const Vector>(c.data(), static_cast<Index>(c.size())));
      write_vector(out, heat_column(g, hc, k).values.values());
    } else if (*psi) {
      const RadialKernelTable t = psi_table(make_kernel(parse_kernel(kernel), psi_d), k, eps);
      auto o = open_out(out);
      o << "r,psi\n";
      for (Index i = 0; i < t.values().size(); ++i)
        o << format_number(t.step() * static_cast<double>(i)) << ',' << format_number(t.values()[i]) << '\n';
    } else if (*continuum) {
      const ReferenceGrid grid = build_grid(make_density(geo), h);
      SolveReport rep;
      const GridFunction u = solve_weighted_poisson(grid, read_sources(sources_file, geo.d), tol, &rep);
      save_grid_function(u, out);
      std::cout << "cells " << grid.size() << " iterations " << rep.iterations << '\n';
    } else {
      for (CLI::App* sub : experiments) {
        if (!*sub) continue;
        auto overrides = overrides_from(sub->remaining());
        overrides["experiment.name"] = sub->get_name();
        const ExperimentConfig c = config_file.empty() ? parse_config("", overrides) : load_config(config_file, overrides);
        const ExperimentResult r = run_experiment(c);
        write_outputs(r);
        for (const SummaryRow& row : r.summary)
          std::cout << "n=" << row.n << " eps=" << format_number(row.eps) << " k=" << row.k << " trials=" << row.trials
                    << " median_l1=" << format_number(row.median_l1) << " median_moll=" << format_number(row.median_moll)
                    << '\n';
        for (const DemoOutcome& o : r.demo)
          std::cout << "seed=" << o.seed << " spike=" << format_number(o.spike) << " poisson_iqr=" << format_number(o.poisson_iqr)
                    << " laplace_band=" << format_number(o.laplace_band) << '\n';
        if (!std::isnan(r.fit.slope))
          std::cout << "slope " << format_number(r.fit.slope) << " +- " << format_number(r.fit.stderr_slope) << '\n';
        std::cout << "wrote " << c.output << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
