#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gp/experiments.hpp"

using namespace gp;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string to_ini(const std::map<std::string, std::string>& kv) {
  std::string out, section;
  for (const auto& [key, value] : kv) {
    const std::string sec = key.substr(0, key.find('.'));
    if (sec != section) out += "[" + (section = sec) + "]\n";
    out += key.substr(key.find('.') + 1) + " = " + value + "\n";
  }
  return out;
}

ExperimentConfig small_converge(const std::string& out) {
  return parse_config(
      "[experiment]\nname = converge\nd = 1\nseeds = 1,2,3,4,5\ntiming = false\n"
      "[ladder]\neps = 0.2,0.14,0.1,0.07\nn_rule = explicit\nn = 400\n",
      {{"experiment.output", out}});
}

}  // namespace

TEST_CASE("config parsing and overrides") {
  const ExperimentConfig c = parse_config(
      "[experiment]\nname = mollify\nd = 2\nseeds = 3,4\n"
      "[density]\ntype = affine\nslope = 0.2,-0.1\n"
      "[kernel]\ntype = bump\n"
      "[ladder]\neps = 0.1\nn = 1500\nk = 2,8\n",
      {{"ladder.n", "1600"}, {"sources.coefficients", "2,-2"}});
  CHECK(c.name == "mollify");
  CHECK(c.d == 2);
  CHECK(c.seeds == std::vector<std::uint64_t>{3, 4});
  CHECK(c.kernel == KernelKind::SmoothBump);
  CHECK(c.n == std::vector<Index>{1600});
  CHECK(c.k == std::vector<Index>{2, 8});
  CHECK(c.sources.coefficients[0] == 2.0);
  CHECK(c.make_density().kind() == DensityKind::Affine);

  // resolved config round-trips
  const ExperimentConfig again = parse_config(to_ini(c.resolved()));
  CHECK(again.resolved() == c.resolved());

  CHECK_THROWS_AS(parse_config("[experiment]\nname = converge\n[ladder]\nbogus = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("", {{"nosection", "1"}}), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[experiment]\nname = sweep\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[ladder]\neps = 0.1,0.2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[ladder]\nsigma = 1.5\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[sources]\ncoefficients = 1,-0.5\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[kernel]\ntype = gaussian\n"), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), std::runtime_error);
}

TEST_CASE("n and k rules") {
  ExperimentConfig c = default_config("converge", 1);
  c.n_max = 1000000000;
  // constant density, d = 1: eps >= C (log n / n)^q with q = (d+4)/(3d^2+13d+10)
  const double q1 = 5.0 / 26.0;
  for (std::size_t p = 0; p < c.eps.size(); ++p) {
    const double e = c.eps[p];
    const Index n = n_for(c, p);
    auto ok = [&](double m) { return std::pow(std::log(m) / m, q1) <= e; };
    CHECK(ok(static_cast<double>(n)));
    CHECK_FALSE(ok(static_cast<double>(n - 1)));
    // k = eps^{-2(d+3)/(d+4)} rounded
    CHECK(k_for(c, p) == static_cast<Index>(std::lround(std::pow(e, -8.0 / 5.0))));
  }
  c.n_max = 20000;
  CHECK(n_for(c, 4) == 20000);
  c.n_constant = 0.5;
  c.n_max = 1000000000;
  CHECK(n_for(c, 0) < n_for(default_config("converge", 1), 0));

  // nonconstant density, d = 2: q = (d+2)/(3d^2+6d+2), k = eps^{-2(d+1)/(d+2)}
  ExperimentConfig d2 = parse_config("[density]\ntype = affine\nslope = 0.5,0.3\n[ladder]\nk_rule = nonconstant\n",
                                     {{"ladder.n_max", "1000000000"}});
  const double q2 = 4.0 / 26.0;
  const Index n0 = n_for(d2, 0);
  CHECK(std::pow(std::log(double(n0)) / n0, q2) <= 0.2);
  CHECK(std::pow(std::log(double(n0 - 1)) / (n0 - 1), q2) > 0.2);
  CHECK(k_for(d2, 0) == std::lround(std::pow(0.2, -1.5)));

  ExperimentConfig clamp = default_config("converge", 1);
  clamp.eps = {0.9};
  CHECK(k_for(clamp, 0) == 2);  // at least two steps
  clamp.k_rule = KRule::Explicit;
  clamp.k = {7};
  CHECK(k_for(clamp, 0) == 7);
}

TEST_CASE("slope fit and order statistics") {
  std::vector<double> x{0.2, 0.1, 0.05, 0.025}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.7));
  const SlopeFit f = fit_log_slope(x, y);
  CHECK(f.slope == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(f.stderr_slope < 1e-10);
  CHECK(f.points == 4);
  CHECK(std::isnan(fit_log_slope({0.2, 0.1, 0.05}, {1.0, 0.5, 0.25}).slope));
  CHECK(fit_log_slope({0.2, 0.1, 0.05}, {1.0, 0.5, 0.25}, 2).slope == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_log_slope({1.0}, {}), std::invalid_argument);

  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK(std::isnan(median({})));
  const auto [q1, q3] = quartiles({1.0, 2.0, 3.0, 4.0, 5.0});
  CHECK(q1 == 2.0);
  CHECK(q3 == 4.0);

  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5}) CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("job seeds and the job pool") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 1; s <= 5; ++s)
    for (std::uint64_t j = 0; j < 20; ++j) seen.insert(job_seed(20240531, s, j));
  CHECK(seen.size() == 100);
  CHECK(job_seed(1, 2, 3) == job_seed(1, 2, 3));
  CHECK(job_seed(1, 2, 3) != job_seed(2, 2, 3));

  std::vector<int> hits(37, 0);
  run_jobs(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  std::atomic<int> count{0};
  CHECK_THROWS_AS(run_jobs(10, 3,
                           [&](std::size_t i) {
                             ++count;
                             if (i == 4) throw std::runtime_error("boom");
                           }),
                  std::runtime_error);
  CHECK(count == 10);
}

TEST_CASE("convergence runs: gauge, checks, zero source, determinism") {
  const auto dir = std::filesystem::temp_directory_path() / "gp_test_converge";
  std::filesystem::remove_all(dir);
  ExperimentConfig c = small_converge((dir / "a").string());
  const ExperimentResult r = run_convergence(c);
  CHECK(r.records.size() == 20);
  CHECK(r.summary.size() == 4);
  CHECK(r.point_checks.size() == 4);
  for (const auto& pc : r.point_checks) {
    CHECK(pc.count("graph_regime"));
    CHECK(pc.count("heat_regime"));
    CHECK(pc.count("dist_gamma_boundary"));
  }
  for (const RateRecord& rec : r.records) {
    CHECK(rec.status == "ok");
    CHECK(rec.l1_error >= 0.0);
    CHECK(rec.moll_error >= 0.0);
    CHECK(rec.checks.at("gauge_aligned"));
    CHECK(rec.runtime_s == 0.0);
    CHECK(rec.slope == r.fit.slope);
  }
  CHECK(r.fit.points == 4);
  for (const SummaryRow& s : r.summary) {
    CHECK(s.trials == 5);
    CHECK(s.q1_l1 <= s.median_l1);
    CHECK(s.median_l1 <= s.q3_l1);
  }

  write_outputs(r);
  std::istringstream results(slurp(dir / "a" / "results.csv"));
  std::string header;
  std::getline(results, header);
  CHECK(header == "experiment,d,n,eps,k,seed,l1_error,moll_error,slope,runtime_s");
  const std::string meta = slurp(dir / "a" / "meta.txt");
  CHECK(meta.find("reference_h = ") != std::string::npos);
  CHECK(meta.find("heat_regime = ") != std::string::npos);
  CHECK(meta.find("[ladder]") != std::string::npos);

  // identical config and seeds give identical files, whatever the thread count
  c.output = (dir / "b").string();
  c.threads = 3;
  write_outputs(run_convergence(c));
  for (const char* f : {"results.csv", "summary.csv", "checks.csv"}) CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));

  ExperimentConfig zero = small_converge((dir / "z").string());
  zero.sources.coefficients.setZero();
  for (const RateRecord& rec : run_convergence(zero).records) {
    CHECK(rec.l1_error == 0.0);
    CHECK(rec.moll_error == 0.0);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("fixed eps ladder runs over n") {
  ExperimentConfig c = parse_config("[experiment]\nd = 1\nseeds = 1,2,3,4,5\n[ladder]\neps = 0.1\nn_rule = explicit\nn = 200,800\n");
  CHECK(c.ladder_size() == 2);
  const ExperimentResult r = run_convergence(c);
  CHECK(r.summary.size() == 2);
  CHECK(r.summary[0].n == 200);
  CHECK(r.summary[1].n == 800);
  CHECK(std::isnan(r.fit.slope));
}

TEST_CASE("mollification runs") {
  ExperimentConfig c = parse_config(
      "[experiment]\nname = mollify\nd = 1\nseeds = 1,2\ntiming = false\n"
      "[ladder]\neps = 0.05\nn = 600\nk = 0,4,16,64,256\n");
  const ExperimentResult r = run_mollification_rate(c);
  CHECK(r.records.size() == 10);
  for (const RateRecord& rec : r.records) {
    CHECK(rec.status == "ok");
    if (rec.k == 0) CHECK(rec.moll_error == 0.0);
    else CHECK(rec.moll_error > 0.0);
  }
  CHECK(r.fit.points == 4);
  CHECK(std::isfinite(r.fit.slope));

  // doubling every coefficient doubles the difference
  ExperimentConfig twice = c;
  twice.sources = c.sources.scaled(2.0);
  const ExperimentResult r2 = run_mollification_rate(twice);
  for (std::size_t i = 0; i < r.records.size(); ++i) CHECK(r2.records[i].moll_error == 2.0 * r.records[i].moll_error);
}

TEST_CASE("heat asymptotics runs") {
  ExperimentConfig c = default_config("heat-asymptotics", 1);
  c.eps = {0.25};
  c.n = {400, 1600};
  c.k = {4};
  c.seeds = {1, 2, 3};
  c.upper = Vector::Constant(1, 12.0);
  c.center = Vector::Constant(1, 6.0);
  const ExperimentResult r = run_heat_asymptotics(c);
  CHECK(r.records.size() == 6);
  for (const RateRecord& rec : r.records) {
    CHECK(rec.status == "ok");
    CHECK(rec.checks.at("unit_mass"));
    CHECK(rec.checks.at("nonnegative"));
    CHECK(rec.l1_error >= 0.0);
  }
  c.center = Vector::Constant(1, 1.0);
  CHECK_THROWS_AS(run_heat_asymptotics(c), std::invalid_argument);
}

TEST_CASE("two-point demo") {
  ExperimentConfig c = parse_config("[experiment]\nname = demo\nd = 2\nseeds = 4,5\n[ladder]\neps = 0.12\nn = 2000\n");
  const ExperimentResult r = demo_two_point(c);
  REQUIRE(r.demo.size() == 2);
  for (const DemoOutcome& o : r.demo) {
    CHECK(o.laplace_extrema_at_labels);
    CHECK(o.laplace.maxCoeff() == o.laplace[o.labeled[0]]);
    CHECK(o.laplace.minCoeff() == o.laplace[o.labeled[1]]);
    CHECK(std::abs(o.poisson_mean) < 1e-10);
    CHECK(o.spike >= 0.0);
    CHECK(o.spike <= 1.0);
    CHECK(o.pwll.size() == 2000);
  }
  const ExperimentResult again = demo_two_point(c);
  for (std::size_t s = 0; s < 2; ++s) {
    CHECK(again.demo[s].laplace == r.demo[s].laplace);
    CHECK(again.demo[s].poisson == r.demo[s].poisson);
  }
  ExperimentConfig same = c;
  same.labels = {Vector::Constant(2, 0.5), Vector::Constant(2, 0.5)};
  for (const RateRecord& rec : demo_two_point(same).records) CHECK(rec.status != "ok");
}
