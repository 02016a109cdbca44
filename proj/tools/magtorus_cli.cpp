#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "io.hpp"
#include "magtorus/error.hpp"
#include "magtorus/parallel.hpp"

using namespace magtorus;
using mtio::json;

namespace {

struct Common {
  int threads = 1;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  std::string out;
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + c.out);
  f << text << '\n';
}

BaseMatrix load(const std::string& graph_path, const std::string& matrix_path) {
  const Graph g = mtio::graph_from_json(mtio::read_file(graph_path));
  return BaseMatrix(g, mtio::matrix_from_json(mtio::read_file(matrix_path.empty() ? graph_path : matrix_path)));
}

RMatrix rows(const std::vector<std::vector<double>>& r) {
  RMatrix m(r.size(), r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j) m(i, j) = r[i][j];
  return m;
}

json instance(const Graph& g, const RMatrix& m) { return {{"graph", mtio::graph_to_json(g)}, {"matrix", mtio::matrix_to_json(m)}}; }

json example(const std::string& name, double gamma, const std::string& graph_path) {
  if (name == "seven-vertex") {
    const Graph g = Graph::from_one_based(7, {{1, 2}, {2, 3}, {1, 4}, {2, 4}, {3, 4}, {4, 5}, {5, 6}, {5, 7}, {6, 7}});
    return instance(g, rows({{1, -1, 0, -1, 0, 0, 0},
                             {-1, 2, -1, -1, 0, 0, 0},
                             {0, -1, 1, -1, 0, 0, 0},
                             {-1, -1, -1, 4, -1, 0, 0},
                             {0, 0, 0, -1, 1, -1, -1},
                             {0, 0, 0, 0, -1, 2, -1},
                             {0, 0, 0, 0, -1, -1, 2}}));
  }
  if (name == "fan") {
    const Graph g = Graph::from_one_based(5, {{1, 2}, {2, 3}, {3, 4}, {1, 5}, {2, 5}, {3, 5}, {4, 5}});
    return instance(g, rows({{1, -1, 0, 0, -1}, {-1, 3, -2, 0, -1}, {0, -2, 10, -4, -1}, {0, 0, -4, 2, -1}, {-1, -1, -1, -1, gamma}}));
  }
  if (name == "laplacian") {
    const Graph g = graph_path.empty() ? Graph::from_one_based(6, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {1, 6}})
                                       : mtio::graph_from_json(mtio::read_file(graph_path));
    RMatrix m(static_cast<std::size_t>(g.n()), static_cast<std::size_t>(g.n()));
    for (const Edge& e : g.edges()) {
      const auto u = static_cast<std::size_t>(e.u), v = static_cast<std::size_t>(e.v);
      m(u, v) = m(v, u) = -1.0;
      m(u, u) += 1.0;
      m(v, v) += 1.0;
    }
    return instance(g, m);
  }
  throw Error(ErrorKind::InvalidInput, "unknown example '" + name + "' (seven-vertex, fan, laplacian)");
}

std::vector<int> parse_support(const std::string& s, int n) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const int v = std::stoi(item);
    if (v < 1 || v > n) throw Error(ErrorKind::InvalidInput, "support vertex " + item + " outside 1.." + std::to_string(n));
    out.push_back(v - 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Verification: return 2;
    case ErrorKind::Genericity: return 3;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical submanifolds of eigenvalues on the magnetic torus"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--tol", c.tol, "gradient tolerance for grid refinement");
  app.add_option("--out", c.out, "output file (default stdout)");

  std::string graph_path, matrix_path, support, format = "json", mode = "atlas", name;
  int samples = 32, k = 1, resolution = 12, n = 10, graphs = 3;
  double gamma = 3.0;
  bool lenient = false;

  auto* atlas = app.add_subcommand("atlas", "critical submanifolds for every support and signing");
  atlas->add_option("graph", graph_path)->required();
  atlas->add_option("matrix", matrix_path)->required();
  atlas->add_option("--support", support, "comma separated 1-based support (default: all)");
  atlas->add_option("--samples", samples, "samples per manifold");
  atlas->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  atlas->add_flag("--lenient", lenient, "skip non-generic eigenpairs instead of failing");

  auto* grid = app.add_subcommand("grid-search", "critical points of lambda_k by torus grid and Newton");
  grid->add_option("graph", graph_path)->required();
  grid->add_option("matrix", matrix_path);
  grid->add_option("--k", k)->required();
  grid->add_option("--resolution", resolution);

  auto* sweep = app.add_subcommand("signings-sweep", "nodal surplus histograms over all signings");
  sweep->add_option("graph", graph_path)->required();
  sweep->add_option("matrix", matrix_path);
  sweep->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  auto* ks = app.add_subcommand("ks-report", "KS distance to the normal law on random 3-regular graphs");
  ks->add_option("--n", n)->required();
  ks->add_option("--graphs", graphs);

  auto* census = app.add_subcommand("cp-census", "critical point counts by zero set size (3-regular)");
  census->add_option("graph", graph_path);
  census->add_option("matrix", matrix_path);
  census->add_option("--n", n, "random 3-regular graph when no file is given");

  auto* bands = app.add_subcommand("band-edges", "band intervals of every eigenvalue");
  bands->add_option("graph", graph_path)->required();
  bands->add_option("matrix", matrix_path);
  bands->add_option("--mode", mode)->check(CLI::IsMember({"atlas", "grid"}));
  bands->add_option("--resolution", resolution);
  bands->add_option("--samples", samples);

  auto* ex = app.add_subcommand("example", "built-in instances: seven-vertex, fan, laplacian");
  ex->add_option("name", name)->required();
  ex->add_option("graph", graph_path, "graph for the laplacian example (default 6-cycle)");
  ex->add_option("--gamma", gamma, "last diagonal entry of the fan");

  auto* gen = app.add_subcommand("gen-3reg", "random 3-regular graph with the experiment matrix");
  gen->add_option("--n", n)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (atlas->parsed()) {
      const BaseMatrix h = load(graph_path, matrix_path);
      if (!lenient) {
        const auto gen_rep = check_genericity(h);
        if (!gen_rep.passed) {
          std::cerr << mtio::genericity_to_json(gen_rep).dump(2) << '\n';
          throw Error(ErrorKind::Genericity, "matrix is not generic; rerun with --lenient to skip bad eigenpairs");
        }
      }
      const auto data = support.empty() ? enumerate_critical_data(h, !lenient)
                                        : critical_data_for_support(h, parse_support(support, h.n()), !lenient);
      std::vector<std::optional<ManifoldReport>> reports(data.size());
      std::vector<std::string> failures(data.size());
      parallel_for(data.size(), c.threads, [&](std::size_t i) {
        try {
          reports[i] = build_manifold(h, data[i], samples, c.seed + i);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::DegenerateLinkage) throw;
          failures[i] = e.what();  // a singular polygon: F is not a manifold there
        }
      });
      if (format == "csv") {
        std::ostringstream os;
        os << mtio::manifold_csv_header();
        for (std::size_t i = 0; i < data.size(); ++i)
          if (reports[i]) os << '\n' << mtio::manifold_csv_row(*reports[i]);
          else std::cerr << "skipped " << mtio::critical_data_to_json(data[i]).dump() << ": " << failures[i] << '\n';
        emit(c, os.str());
      } else {
        json arr = json::array();
        for (std::size_t i = 0; i < data.size(); ++i) {
          if (reports[i]) {
            arr.push_back(mtio::manifold_to_json(h.graph(), *reports[i]));
          } else {
            json j = mtio::critical_data_to_json(data[i]);
            j["error"] = failures[i];
            arr.push_back(j);
          }
        }
        emit(c, arr.dump(2));
      }
    } else if (grid->parsed()) {
      const BaseMatrix h = load(graph_path, matrix_path);
      GridOptions opt;
      opt.resolution = resolution;
      opt.refine_tol = c.tol;
      opt.threads = c.threads;
      emit(c, mtio::grid_to_json(h.graph(), grid_search_critical(h, k, opt)).dump(2));
    } else if (sweep->parsed()) {
      const auto r = surplus_sweep(load(graph_path, matrix_path), c.threads);
      if (format == "csv") {
        std::ostringstream os;
        os << "k,sigma,count";
        for (const auto& d : r.per_k)
          for (std::size_t s = 0; s < d.counts.size(); ++s) os << '\n' << d.k << ',' << s << ',' << d.counts[s];
        emit(c, os.str());
      } else {
        emit(c, mtio::sweep_to_json(r).dump(2));
      }
    } else if (ks->parsed()) {
      emit(c, mtio::ks_to_json(ks_report(n, graphs, c.seed, c.threads)).dump(2));
    } else if (census->parsed()) {
      if (graph_path.empty()) {
        const Graph g = random_3regular(n, c.seed);
        emit(c, mtio::census_to_json(cp_census(BaseMatrix(g, experiment_matrix(g)), c.threads)).dump(2));
      } else {
        emit(c, mtio::census_to_json(cp_census(load(graph_path, matrix_path), c.threads)).dump(2));
      }
    } else if (bands->parsed()) {
      const BaseMatrix h = load(graph_path, matrix_path);
      const auto r = band_edges(h, mode == "grid" ? BandMode::Grid : BandMode::Atlas, resolution, samples, c.seed);
      emit(c, mtio::bands_to_json(h.graph(), r).dump(2));
    } else if (ex->parsed()) {
      emit(c, example(name, gamma, graph_path).dump(2));
    } else if (gen->parsed()) {
      const Graph g = random_3regular(n, c.seed);
      emit(c, instance(g, experiment_matrix(g)).dump(2));
    }
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
