#include "io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "magtorus/error.hpp"

namespace mtio {

using namespace magtorus;

namespace {

std::size_t uz(int x) { return static_cast<std::size_t>(x); }

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

json one_based(const std::vector<int>& v) {
  json out = json::array();
  for (int x : v) out.push_back(x + 1);
  return out;
}

json optional_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

Graph graph_from_json(const json& j) {
  if (j.contains("graph")) return graph_from_json(j.at("graph"));
  if (!j.contains("n") || !j.contains("edges")) bad("graph needs \"n\" and \"edges\"");
  const int n = j.at("n").get<int>();
  if (n < 1) bad("graph needs at least one vertex");
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) bad("edges are pairs [r, s]");
    edges.emplace_back(e[0].get<int>() - 1, e[1].get<int>() - 1);
  }
  Graph g(n, edges);
  if (!g.connected()) {
    const auto ids = g.component_ids();
    std::ostringstream os;
    os << "graph is disconnected; vertices not reachable from 1:";
    for (int v = 0; v < n; ++v)
      if (ids[uz(v)] != ids[0]) os << ' ' << v + 1;
    bad(os.str());
  }
  return g;
}

json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u + 1, e.v + 1});
  return {{"n", g.n()}, {"edges", edges}};
}

RMatrix matrix_from_json(const json& j) {
  if (j.contains("matrix")) return matrix_from_json(j.at("matrix"));
  if (!j.contains("re")) bad("matrix needs \"re\"");
  const auto& re = j.at("re");
  const std::size_t n = re.size();
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != n) bad("matrix \"dim\" disagrees with \"re\"");
  RMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (re[r].size() != n) bad("matrix rows must have length dim");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = re[r][c].get<double>();
  }
  if (j.contains("im"))
    for (const auto& row : j.at("im"))
      for (const auto& x : row)
        if (std::abs(x.get<double>()) > 0.0) bad("base matrix must be real: \"im\" has a nonzero entry");
  return m;
}

json matrix_to_json(const RMatrix& m) {
  json re = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    re.push_back(row);
  }
  return {{"dim", m.rows()}, {"re", re}};
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    bad(path + ": " + e.what());
  }
}

std::string edge_key(const Graph& g, int edge) {
  const Edge& e = g.edge(edge);
  return std::to_string(e.u + 1) + "-" + std::to_string(e.v + 1);
}

json point_to_json(const Graph& g, const MagneticPoint& p) {
  json out = json::object();
  for (std::size_t i = 0; i < p.free_edges.size(); ++i) out[edge_key(g, p.free_edges[i])] = p.angles[i];
  return out;
}

json critical_data_to_json(const CriticalData& d) {
  return {{"support", one_based(d.v_n)}, {"signing", d.signing_n.bits()}, {"k_n", d.k_n}, {"lambda", d.lambda}};
}

json manifold_to_json(const Graph& g, const ManifoldReport& r) {
  json linkages = json::array();
  for (const auto& [v, spec] : r.linkage_specs) linkages.push_back({{"vertex", v + 1}, {"sides", spec.b}});
  json samples = json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"point", point_to_json(g, s.point)},
                       {"k", s.k},
                       {"k_zz", s.k_zz},
                       {"simple", s.simple},
                       {"zz_resonant", s.zz_resonant},
                       {"morse_index", optional_int(s.morse_index)},
                       {"extremum", to_string(s.extremum)},
                       {"residual", s.residual}});
  json out = critical_data_to_json(r.data);
  out.update(json{{"nonempty", r.nonempty},
          {"dim", r.dim},
          {"codim", r.codim},
          {"components", r.components},
          {"sigma_n", r.sigma_n},
          {"beta_gn", r.beta_n},
          {"min_index", optional_int(r.min_index())},
          {"max_index", optional_int(r.max_index())},
          {"linkages", linkages},
          {"samples", samples}});
  return out;
}

std::string manifold_csv_header() {
  return "support_size,beta_GN,k_N,lambda,nonempty,dim,components,sample_count,min_index,max_index";
}

std::string manifold_csv_row(const ManifoldReport& r) {
  auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
  std::ostringstream os;
  os.precision(17);
  os << r.data.v_n.size() << ',' << r.beta_n << ',' << r.data.k_n << ',' << r.data.lambda << ','
     << (r.nonempty ? 1 : 0) << ',' << r.dim << ',' << r.components << ',' << r.samples.size() << ','
     << opt(r.min_index()) << ',' << opt(r.max_index());
  return os.str();
}

json genericity_to_json(const GenericityReport& r) {
  return {{"passed", r.passed},       {"truncated", r.truncated},     {"subgraphs", r.subgraphs},
          {"signings", r.signings},   {"worst_gap", r.worst_gap},     {"worst_entry", r.worst_entry},
          {"failures", r.failures}};
}

json grid_to_json(const Graph& g, const GridSearchResult& r) {
  json cands = json::array();
  for (const auto& c : r.candidates)
    cands.push_back({{"point", point_to_json(g, c.point)},
                     {"gradient_norm", c.gradient_norm},
                     {"gap", c.gap},
                     {"iterations", c.iterations},
                     {"kind", to_string(c.kind)}});
  return {{"k", r.k},         {"resolution", r.resolution},   {"cells", r.cells},
          {"seeds", r.seeds}, {"unconverged", r.unconverged}, {"candidates", cands}};
}

json sweep_to_json(const SweepResult& r) {
  json per_k = json::array();
  for (const auto& d : r.per_k)
    per_k.push_back({{"k", d.k},
                     {"counts", d.counts},
                     {"tallied", d.tallied},
                     {"skipped", d.skipped},
                     {"mean", d.mean},
                     {"stddev", d.stddev},
                     {"ks", d.ks_distance ? json(*d.ks_distance) : json(nullptr)}});
  return {{"n", r.n}, {"beta", r.beta}, {"per_k", per_k}};
}

json ks_to_json(const KsReport& r) {
  json graphs = json::array();
  for (const auto& e : r.graphs)
    graphs.push_back({{"n", e.n},
                      {"beta", e.beta},
                      {"seed", e.seed},
                      {"max_ks", e.max_ks},
                      {"argmax_k", e.argmax_k},
                      {"excluded", e.excluded}});
  return {{"graphs", graphs}};
}

json census_to_json(const CensusResult& r) {
  return {{"buckets", r.buckets}, {"supports", r.supports}, {"critical_data", r.data},
          {"feasible", r.feasible}, {"skipped", r.skipped},  {"total", r.total()}};
}

json bands_to_json(const Graph& g, const BandReport& r) {
  auto witness = [&](const BandWitness& w) {
    return json{{"point", point_to_json(g, w.point)}, {"source", w.source}, {"extremum", to_string(w.extremum)}};
  };
  json bands = json::array();
  for (const auto& b : r.bands)
    bands.push_back({{"k", b.k}, {"min", b.min}, {"max", b.max}, {"at_min", witness(b.at_min)}, {"at_max", witness(b.at_max)}});
  json gaps = json::array();
  for (const auto& [k, gap] : r.gaps) gaps.push_back({{"below", k}, {"above", k + 1}, {"width", gap}});
  return {{"bands", bands}, {"gaps", gaps}};
}

}  // namespace mtio
