#include "gp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "gp/heat.hpp"
#include "gp/nonlocal.hpp"
#include "gp/poisson.hpp"
#include "gp/psi.hpp"

namespace gp {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double deg_mean(const Graph& g, const Vector& u) { return g.degrees().dot(u) / g.degrees().sum(); }

double l1_graph(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().mean(); }

std::map<std::string, bool> assumption_checks(const ExperimentConfig& c, Index n, double eps, Index k) {
  const double d = c.d;
  const double eps_k = eps * std::sqrt(static_cast<double>(k));
  std::map<std::string, bool> m;
  m["graph_regime"] = n >= 2 && eps > 0.0 && eps <= 1.0 && static_cast<double>(n) * std::pow(eps, d) >= 1.0;
  m["heat_regime"] = eps <= 0.5 && k >= 1 && eps_k <= 1.0;
  if (!c.sources.anchors.empty()) {
    const Domain dom = c.make_domain();
    double dist = std::numeric_limits<double>::infinity();
    for (const Vector& x : c.sources.anchors) dist = std::min(dist, dom.boundary_distance(x));
    m["dist_gamma_boundary"] = eps_k * std::sqrt(std::log(1.0 / eps)) <= dist / (24.0 * (d + 2.0));
    m["n_eps_2d"] = static_cast<double>(n) * std::pow(eps, 2.0 * d) >= 1.0;
    m["eps_le_eps_k_pow_d"] = eps <= std::pow(eps_k, d) && std::pow(eps_k, d) <= 1.0;
  }
  return m;
}

RateRecord base_record(const ExperimentConfig& c, Index n, double eps, Index k, std::uint64_t seed) {
  RateRecord r;
  r.experiment = c.name;
  r.d = c.d;
  r.n = n;
  r.eps = eps;
  r.k = k;
  r.seed = seed;
  r.l1_error = nan;
  r.moll_error = nan;
  r.slope = nan;
  r.runtime_s = nan;
  return r;
}

// summary over the records sharing (n, eps, k), in first-seen order
std::vector<SummaryRow> summarize(const std::vector<RateRecord>& records) {
  std::vector<SummaryRow> rows;
  std::vector<std::vector<double>> l1, moll;
  for (const RateRecord& r : records) {
    std::size_t i = 0;
    while (i < rows.size() && !(rows[i].n == r.n && rows[i].eps == r.eps && rows[i].k == r.k)) ++i;
    if (i == rows.size()) {
      rows.push_back({r.n, r.eps, r.k});
      l1.emplace_back();
      moll.emplace_back();
    }
    if (r.status != "ok") continue;
    ++rows[i].trials;
    if (!std::isnan(r.l1_error)) l1[i].push_back(r.l1_error);
    if (!std::isnan(r.moll_error)) moll[i].push_back(r.moll_error);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].median_l1 = median(l1[i]);
    std::tie(rows[i].q1_l1, rows[i].q3_l1) = quartiles(l1[i]);
    rows[i].median_moll = median(moll[i]);
    std::tie(rows[i].q1_moll, rows[i].q3_moll) = quartiles(moll[i]);
  }
  return rows;
}

void stamp_slope(ExperimentResult& r) {
  for (RateRecord& rec : r.records) rec.slope = r.fit.slope;
}

}  // namespace

double median(std::vector<double> v) {
  if (v.empty()) return nan;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::pair<double, double> quartiles(std::vector<double> v) {
  if (v.empty()) return {nan, nan};
  std::sort(v.begin(), v.end());
  auto at = [&](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return {at(0.25), at(0.75)};
}

SlopeFit fit_log_slope(const std::vector<double>& x, const std::vector<double>& y, int min_points) {
  if (x.size() != y.size()) throw std::invalid_argument("slope fit: length mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  SlopeFit f;
  f.points = static_cast<int>(lx.size());
  if (f.points < std::max(2, min_points)) {
    f.slope = f.stderr_slope = nan;
    return f;
  }
  const double m = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / m;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  f.slope = sxy / sxx;
  double sse = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - my - f.slope * (lx[i] - mx);
    sse += e * e;
  }
  f.stderr_slope = lx.size() > 2 ? std::sqrt(sse / (m - 2.0) / sxx) : nan;
  return f;
}

std::uint64_t job_seed(std::uint64_t master, std::uint64_t seed, std::uint64_t job) {
  return splitmix(splitmix(master) ^ splitmix(seed + 0x632be59bd9b4e019ULL) ^ splitmix(job * 0x9e3779b97f4a7c15ULL + 1));
}

void run_jobs(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex m;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(m);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double reference_step(const ExperimentConfig& c) {
  if (c.reference_h > 0.0) return c.reference_h;
  const double eps_min = *std::min_element(c.eps.begin(), c.eps.end());
  const double target = eps_min / (c.d == 1 ? 100.0 : 10.0);
  double h = 1.0;
  while (h > target) h *= 0.5;
  return h;
}

GridFunction continuum_reference(const ExperimentConfig& c) {
  const Density rho = c.make_density();
  const ReferenceGrid grid = build_grid(rho, reference_step(c));
  const Vector f = 2.0 * deposit_atoms(grid, c.sources);
  return solve_weighted_poisson(grid, f, std::min(c.tol, 1e-10));
}

ExperimentResult run_convergence(const ExperimentConfig& c) {
  ExperimentResult res;
  res.config = c;
  const Density rho = c.make_density();
  const KernelProfile kernel = make_kernel(c.kernel, c.d);
  const GridFunction ref = continuum_reference(c);
  const std::size_t points = c.ladder_size();
  for (std::size_t p = 0; p < points; ++p)
    res.point_checks.push_back(assumption_checks(c, n_for(c, p), c.eps_at(p), k_for(c, p)));

  const std::size_t seeds = c.seeds.size();
  res.records.resize(points * seeds);
  run_jobs(points * seeds, c.threads, [&](std::size_t job) {
    const std::size_t p = job / seeds, s = job % seeds;
    const Index n = n_for(c, p), k = k_for(c, p);
    const double eps = c.eps_at(p);
    RateRecord r = base_record(c, n, eps, k, c.seeds[s]);
    const auto t0 = Clock::now();
    try {
      const PointSet pts = sample_points(rho, n, job_seed(c.master_seed, c.seeds[s], job));
      const Graph g = build_graph(pts, eps, kernel);
      r.checks["connected"] = g.connected();
      SolveOptions opts;
      opts.tol = c.tol;
      const auto [u, rep] = solve_graph_poisson(g, c.sources, opts);
      Vector un = u.values();
      Vector uc = interpolate_at(ref, pts);
      un.array() -= deg_mean(g, un);
      uc.array() -= deg_mean(g, uc);
      const double scale = std::max(1.0, un.cwiseAbs().maxCoeff());
      r.checks["gauge_aligned"] = std::abs(deg_mean(g, un)) <= 1e-10 * scale && std::abs(deg_mean(g, uc)) <= 1e-10 * scale;
      r.l1_error = l1_graph(un, uc);
      r.moll_error = l1_graph(un, heat_convolve(g, k, un));
    } catch (const std::exception& e) {
      r.status = e.what();
    }
    r.runtime_s = c.timing ? seconds_since(t0) : 0.0;
    res.records[job] = std::move(r);
  });

  res.summary = summarize(res.records);
  std::vector<double> x, y;
  const bool over_eps = c.eps.size() > 1;
  for (std::size_t i = over_eps ? static_cast<std::size_t>(c.drop_largest) : 0; i < res.summary.size(); ++i) {
    x.push_back(over_eps ? res.summary[i].eps : static_cast<double>(res.summary[i].n));
    y.push_back(res.summary[i].median_l1);
  }
  res.fit = fit_log_slope(x, y, 4);
  stamp_slope(res);
  return res;
}

ExperimentResult run_mollification_rate(const ExperimentConfig& c) {
  ExperimentResult res;
  res.config = c;
  const Density rho = c.make_density();
  const KernelProfile kernel = make_kernel(c.kernel, c.d);
  const Index n = n_for(c, 0);
  const double eps = c.eps[0];
  std::vector<Index> ks = c.k;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  for (Index k : ks) res.point_checks.push_back(assumption_checks(c, n, eps, std::max<Index>(k, 1)));

  const std::size_t seeds = c.seeds.size();
  std::vector<std::vector<RateRecord>> per_seed(seeds);
  run_jobs(seeds, c.threads, [&](std::size_t s) {
    const auto t0 = Clock::now();
    std::vector<RateRecord> rows;
    for (Index k : ks) rows.push_back(base_record(c, n, eps, k, c.seeds[s]));
    try {
      const PointSet pts = sample_points(rho, n, job_seed(c.master_seed, c.seeds[s], s));
      const Graph g = build_graph(pts, eps, kernel);
      SolveOptions opts;
      opts.tol = c.tol;
      const Vector u = solve_graph_poisson(g, c.sources, opts).first.values();
      Vector v = u;
      Index done = 0;
      for (std::size_t j = 0; j < ks.size(); ++j) {
        v = heat_convolve(g, ks[j] - done, v);
        done = ks[j];
        rows[j].moll_error = l1_graph(u, v);
        rows[j].checks["connected"] = g.connected();
        rows[j].runtime_s = c.timing ? seconds_since(t0) : 0.0;
      }
    } catch (const std::exception& e) {
      for (RateRecord& r : rows) r.status = e.what();
    }
    per_seed[s] = std::move(rows);
  });
  // ordered by k, then seed
  for (std::size_t j = 0; j < ks.size(); ++j)
    for (std::size_t s = 0; s < seeds; ++s) res.records.push_back(per_seed[s][j]);

  res.summary = summarize(res.records);
  std::vector<double> x, y;
  for (const SummaryRow& row : res.summary)
    if (row.k > 0) {
      x.push_back(eps * std::sqrt(static_cast<double>(row.k)));
      y.push_back(row.median_moll);
    }
  res.fit = fit_log_slope(x, y, 4);
  stamp_slope(res);
  return res;
}

ExperimentResult run_heat_asymptotics(const ExperimentConfig& c) {
  ExperimentResult res;
  res.config = c;
  const Density rho = c.make_density();
  const KernelProfile kernel = make_kernel(c.kernel, c.d);
  const double eps = c.eps[0];
  const Index k = k_for(c, 0);
  if (k < 1) throw std::invalid_argument("heat asymptotics: k must be at least 1");
  const ScaleConstants sc = scale_constants(c.d, k, eps);
  auto check_center = [&](const Vector& x) {
    if (!rho.domain().contains(x) || rho.domain().boundary_distance(x) < sc.R_k)
      throw std::invalid_argument("heat asymptotics: center too close to the boundary (need B(x, R_k) inside)");
  };
  check_center(c.center);
  const RadialKernelTable psi = psi_table(kernel, k, eps);

  const std::size_t points = c.ladder_size(), seeds = c.seeds.size();
  for (std::size_t p = 0; p < points; ++p) res.point_checks.push_back(assumption_checks(c, n_for(c, p), eps, k));
  res.records.resize(points * seeds);
  run_jobs(points * seeds, c.threads, [&](std::size_t job) {
    const std::size_t p = job / seeds, s = job % seeds;
    const Index n = n_for(c, p);
    RateRecord r = base_record(c, n, eps, k, c.seeds[s]);
    const auto t0 = Clock::now();
    try {
      const PointSet pts = sample_points(rho, n, job_seed(c.master_seed, c.seeds[s], job));
      const Graph g = build_graph(pts, eps, kernel);
      // the node nearest the requested center
      const Index x = closest_point(g, c.center);
      const Vector x0 = pts.col(x);
      check_center(x0);
      const LatticeFunction avg = repeated_average(rho, kernel, eps, x0, k - 1, eps / 8.0);
      const double rh = rho_hat(rho, kernel, eps, x0);
      const Vector h = heat_column(g, x, k).values.values();
      Vector sp(n), sm(n);
      for (Index i = 0; i < n; ++i) {
        sp[i] = psi((pts.col(i) - x0).norm()) / rho(pts.col(i));
        sm[i] = avg.sample(pts.col(i)) / rh;
      }
      r.l1_error = l1_graph(h, sp);
      r.moll_error = l1_graph(h, sm);
      r.checks["unit_mass"] = std::abs(h.mean() - 1.0) < 1e-12;
      r.checks["nonnegative"] = h.minCoeff() >= -1e-14;
    } catch (const std::exception& e) {
      r.status = e.what();
    }
    r.runtime_s = c.timing ? seconds_since(t0) : 0.0;
    res.records[job] = std::move(r);
  });
  res.summary = summarize(res.records);
  std::vector<double> x, y;
  for (const SummaryRow& row : res.summary) {
    x.push_back(static_cast<double>(row.n));
    y.push_back(row.median_l1);
  }
  res.fit = fit_log_slope(x, y, 2);
  stamp_slope(res);
  return res;
}

ExperimentResult demo_two_point(const ExperimentConfig& c) {
  ExperimentResult res;
  res.config = c;
  const Density rho = c.make_density();
  const KernelProfile kernel = make_kernel(c.kernel, c.d);
  const Index n = n_for(c, 0);
  const double eps = c.eps[0];
  res.point_checks.push_back(assumption_checks(c, n, eps, 1));
  const std::size_t seeds = c.seeds.size();
  res.records.resize(seeds);
  res.demo.resize(seeds);
  run_jobs(seeds, c.threads, [&](std::size_t s) {
    RateRecord r = base_record(c, n, eps, 0, c.seeds[s]);
    DemoOutcome out;
    out.seed = c.seeds[s];
    const auto t0 = Clock::now();
    try {
      out.points = sample_points(rho, n, job_seed(c.master_seed, c.seeds[s], s));
      const Graph g = build_graph(out.points, eps, kernel);
      const double mean_label = 0.5 * (c.label_values[0] + c.label_values[1]);
      NodeValues labels, sources;
      for (int i = 0; i < 2; ++i) {
        const Index node = closest_point(g, c.labels[i]);
        out.labeled.push_back(node);
        labels.emplace_back(node, c.label_values[i]);
        sources.emplace_back(node, c.label_values[i] - mean_label);
      }
      if (out.labeled[0] == out.labeled[1]) throw std::invalid_argument("demo: both labels map to the same node");
      SolveOptions opts;
      opts.tol = c.tol;
      out.laplace = solve_laplace_learning(g, labels, c.tol).values();
      out.poisson = solve_graph_poisson(g, sources, opts).first.values();
      out.pwll = solve_pwll(g, labels, c.tol).values();

      std::vector<double> lap, poi;
      for (Index i = 0; i < n; ++i)
        if (i != out.labeled[0] && i != out.labeled[1]) {
          lap.push_back(out.laplace[i]);
          poi.push_back(out.poisson[i]);
        }
      const double gap = std::abs(c.label_values[0] - c.label_values[1]);
      const double med = median(lap);
      const auto near = std::count_if(lap.begin(), lap.end(), [&](double v) { return std::abs(v - med) <= 0.05 * gap; });
      out.spike = static_cast<double>(near) / static_cast<double>(lap.size());
      out.laplace_band = 0.1 * gap;
      const auto [lq1, lq3] = quartiles(lap);
      const auto [pq1, pq3] = quartiles(poi);
      out.laplace_iqr = lq3 - lq1;
      out.poisson_iqr = pq3 - pq1;
      out.poisson_mean = deg_mean(g, out.poisson);
      const double hi = std::max(c.label_values[0], c.label_values[1]);
      const double lo = std::min(c.label_values[0], c.label_values[1]);
      out.laplace_extrema_at_labels = out.laplace.maxCoeff() <= hi + c.tol && out.laplace.minCoeff() >= lo - c.tol;
      r.checks["connected"] = g.connected();
      r.checks["laplace_extrema_at_labels"] = out.laplace_extrema_at_labels;
      r.checks["poisson_mean_zero"] = std::abs(out.poisson_mean) <= 1e-10 * std::max(1.0, out.poisson.cwiseAbs().maxCoeff());
    } catch (const std::exception& e) {
      r.status = e.what();
    }
    r.runtime_s = c.timing ? seconds_since(t0) : 0.0;
    res.records[s] = std::move(r);
    res.demo[s] = std::move(out);
  });
  res.summary = summarize(res.records);
  res.fit = fit_log_slope({}, {}, 4);
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
  if (c.name == "converge") return run_convergence(c);
  if (c.name == "mollify") return run_mollification_rate(c);
  if (c.name == "heat-asymptotics") return run_heat_asymptotics(c);
  if (c.name == "demo") return demo_two_point(c);
  throw std::invalid_argument("unknown experiment '" + c.name + "'");
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

void write_outputs(const ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  const std::filesystem::path dir(c.output);
  std::filesystem::create_directories(dir);
  const auto num = format_number;

  auto results = open_out(dir / "results.csv");
  results << "experiment,d,n,eps,k,seed,l1_error,moll_error,slope,runtime_s\n";
  for (const RateRecord& rec : r.records)
    results << rec.experiment << ',' << rec.d << ',' << rec.n << ',' << num(rec.eps) << ',' << rec.k << ',' << rec.seed
            << ',' << num(rec.l1_error) << ',' << num(rec.moll_error) << ',' << num(rec.slope) << ','
            << num(rec.runtime_s) << '\n';

  auto summary = open_out(dir / "summary.csv");
  summary << "experiment,d,n,eps,k,trials,median_l1,q1_l1,q3_l1,iqr_l1,median_moll,q1_moll,q3_moll,iqr_moll\n";
  for (const SummaryRow& s : r.summary)
    summary << c.name << ',' << c.d << ',' << s.n << ',' << num(s.eps) << ',' << s.k << ',' << s.trials << ','
            << num(s.median_l1) << ',' << num(s.q1_l1) << ',' << num(s.q3_l1) << ',' << num(s.q3_l1 - s.q1_l1) << ','
            << num(s.median_moll) << ',' << num(s.q1_moll) << ',' << num(s.q3_moll) << ','
            << num(s.q3_moll - s.q1_moll) << '\n';

  auto checks = open_out(dir / "checks.csv");
  checks << "n,eps,k,seed,check,value,status\n";
  for (const RateRecord& rec : r.records) {
    if (rec.checks.empty())
      checks << rec.n << ',' << num(rec.eps) << ',' << rec.k << ',' << rec.seed << ",none,," << csv_field(rec.status) << '\n';
    for (const auto& [name, ok] : rec.checks)
      checks << rec.n << ',' << num(rec.eps) << ',' << rec.k << ',' << rec.seed << ',' << name << ','
             << (ok ? "true" : "false") << ',' << csv_field(rec.status) << '\n';
  }

  auto meta = open_out(dir / "meta.txt");
  std::string section;
  for (const auto& [key, value] : c.resolved()) {
    const std::string sec = key.substr(0, key.find('.'));
    if (sec != section) {
      meta << (section.empty() ? "" : "\n") << '[' << sec << "]\n";
      section = sec;
    }
    meta << key.substr(key.find('.') + 1) << " = " << value << '\n';
  }
  meta << "\n[resolved]\n";
  meta << "domain = " << c.make_domain().describe() << '\n';
  meta << "density = " << c.make_density().describe() << '\n';
  if (c.name == "converge") meta << "reference_h = " << num(reference_step(c)) << '\n';
  meta << "slope = " << num(r.fit.slope) << '\n';
  meta << "slope_stderr = " << num(r.fit.stderr_slope) << '\n';
  meta << "slope_points = " << r.fit.points << '\n';
  for (std::size_t p = 0; p < r.point_checks.size(); ++p) {
    meta << "\n[point " << p << "]\n";
    if (c.name == "mollify") {
      std::vector<Index> ks = c.k;
      std::sort(ks.begin(), ks.end());
      ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
      meta << "n = " << n_for(c, 0) << "\neps = " << num(c.eps[0]) << "\nk = " << ks.at(p) << '\n';
    } else {
      meta << "n = " << n_for(c, p) << "\neps = " << num(c.eps_at(p)) << "\nk = " << (c.name == "demo" ? 1 : k_for(c, p))
           << '\n';
    }
    for (const auto& [name, ok] : r.point_checks[p]) meta << name << " = " << (ok ? "true" : "false") << '\n';
  }

  if (!r.demo.empty()) {
    auto stats = open_out(dir / "demo.csv");
    stats << "seed,spike_statistic,laplace_band,laplace_iqr,poisson_iqr,poisson_deg_mean,laplace_extrema_at_labels\n";
    for (const DemoOutcome& o : r.demo) {
      stats << o.seed << ',' << num(o.spike) << ',' << num(o.laplace_band) << ',' << num(o.laplace_iqr) << ','
            << num(o.poisson_iqr) << ',' << num(o.poisson_mean) << ',' << (o.laplace_extrema_at_labels ? "true" : "false")
            << '\n';
      if (o.points.cols() == 0) continue;
      auto fields = open_out(dir / ("fields_seed" + std::to_string(o.seed) + ".csv"));
      for (Index a = 0; a < o.points.rows(); ++a) fields << 'x' << a << ',';
      fields << "laplace,poisson,pwll,labeled\n";
      for (Index i = 0; i < o.points.cols(); ++i) {
        for (Index a = 0; a < o.points.rows(); ++a) fields << num(o.points(a, i)) << ',';
        const bool lab = std::find(o.labeled.begin(), o.labeled.end(), i) != o.labeled.end();
        fields << num(o.laplace[i]) << ',' << num(o.poisson[i]) << ',' << num(o.pwll[i]) << ',' << (lab ? 1 : 0) << '\n';
      }
    }
  }
}

}  // namespace gp
