#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "gp/graph.hpp"

namespace gp {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(17);
  return out;
}

}  // namespace

void save_points(const PointSet& points, const std::string& path) {
  auto out = open_out(path);
  for (Index a = 0; a < points.rows(); ++a) out << (a ? "," : "") << "x" << a;
  out << "\n";
  for (Index i = 0; i < points.cols(); ++i) {
    for (Index a = 0; a < points.rows(); ++a) out << (a ? "," : "") << points(a, i);
    out << "\n";
  }
}

PointSet load_points(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  std::getline(in, line);
  const auto header = split(line, ',');
  const Index d = static_cast<Index>(header.size());
  std::vector<double> flat;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (static_cast<Index>(cells.size()) != d) throw std::runtime_error("points csv: ragged row");
    for (const auto& c : cells) flat.push_back(std::stod(c));
  }
  const Index n = static_cast<Index>(flat.size()) / d;
  return Eigen::Map<const PointSet>(flat.data(), d, n);
}

void save_graph(const Graph& g, const std::string& path, std::uint64_t seed) {
  {
    auto out = open_out(path);
    out << "i,j,w\n";
    const SparseMatrix& w = g.upper_weights();
    for (Index j = 0; j < w.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(w, j); it; ++it) out << it.row() << "," << j << "," << it.value() << "\n";
  }
  auto meta = open_out(path + ".meta");
  meta << "n=" << g.size() << "\n"
       << "d=" << g.dim() << "\n"
       << "eps=" << (g.has_scale() ? g.eps() : 0.0) << "\n"
       << "kernel=" << (g.has_scale() ? g.kernel().name() : std::string("none")) << "\n"
       << "sigma_eta=" << (g.has_scale() ? g.sigma() : 0.0) << "\n"
       << "seed=" << seed << "\n";
  if (g.dim() > 0) save_points(g.points(), path + ".points.csv");
}

Graph load_graph(const std::string& path, GraphMetadata* meta_out) {
  std::map<std::string, std::string> kv;
  {
    auto in = open_in(path + ".meta");
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  GraphMetadata meta;
  meta.n = std::stoll(kv.at("n"));
  meta.d = std::stoi(kv.at("d"));
  meta.eps = std::stod(kv.at("eps"));
  meta.kernel = kv.at("kernel");
  meta.sigma_eta = std::stod(kv.at("sigma_eta"));
  meta.seed = std::stoull(kv.at("seed"));

  std::vector<Eigen::Triplet<double>> trip;
  auto in = open_in(path);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 3) throw std::runtime_error("edge csv: expected i,j,w");
    Index i = std::stoll(cells[0]), j = std::stoll(cells[1]);
    if (i > j) std::swap(i, j);
    trip.emplace_back(i, j, std::stod(cells[2]));
  }
  SparseMatrix upper(meta.n, meta.n);
  upper.setFromTriplets(trip.begin(), trip.end());
  PointSet points(0, meta.n);
  if (meta.d > 0) points = load_points(path + ".points.csv");
  std::optional<GraphScale> scale;
  if (meta.kernel != "none") scale = GraphScale{meta.eps, make_kernel(parse_kernel(meta.kernel), meta.d)};
  if (meta_out) *meta_out = meta;
  return Graph(std::move(points), std::move(upper), std::move(scale));
}

}  // namespace gp
