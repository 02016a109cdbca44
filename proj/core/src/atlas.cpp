#include "magtorus/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "magtorus/error.hpp"
#include "magtorus/random.hpp"

namespace magtorus {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxFailures = 32;
constexpr int kFullEnumerationCap = 16;  // 2^16 points for zero-dimensional F

std::size_t uz(int x) { return static_cast<std::size_t>(x); }

int other_end(const Graph& g, int e, int v) { return g.edge(e).u == v ? g.edge(e).v : g.edge(e).u; }

// Real unit eigenvector, largest entry made positive.
std::vector<double> real_vector(const EigenSystem& es, std::size_t k) {
  const CVector c = es.vector(k);
  std::size_t arg = 0;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (std::abs(c[i]) > std::abs(c[arg]) + 1e-12) arg = i;
  const cplx phase = std::abs(c[arg]) > 0 ? std::conj(c[arg]) / std::abs(c[arg]) : cplx{1.0};
  std::vector<double> out(c.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    out[i] = (c[i] * phase).real();
    norm += out[i] * out[i];
  }
  norm = std::sqrt(norm);
  for (double& x : out) x /= norm;
  return out;
}

// The boundary polygon of vertex r: free neighbours in ascending order, the
// tree neighbour last.
struct Polygon {
  int r = 0;
  std::vector<int> edges;       // N-side edges, tree edge last
  std::vector<double> phase;    // 0 or pi: sign of h_rs psi_s
  LinkageSpec spec;
};

std::vector<Polygon> polygons(const BaseMatrix& h, const SupportPartition& part, const CriticalData& data) {
  const Graph& g = h.graph();
  std::vector<int> local(uz(g.n()), -1);
  for (std::size_t i = 0; i < data.v_n.size(); ++i) local[uz(data.v_n[i])] = static_cast<int>(i);
  std::vector<Polygon> out;
  for (std::size_t i = 0; i < part.v_zn.size(); ++i) {
    Polygon poly;
    poly.r = part.v_zn[i];
    const int tree_edge = part.zn_tree_edge[i];
    for (int w : g.neighbors(poly.r)) {
      if (local[uz(w)] < 0) continue;
      const int e = g.edge_index(poly.r, w);
      if (e != tree_edge) poly.edges.push_back(e);
    }
    poly.edges.push_back(tree_edge);
    for (int e : poly.edges) {
      const int s = other_end(g, e, poly.r);
      const double c = h.entry(e) * data.psi_n[uz(local[uz(s)])];
      poly.phase.push_back(c > 0 ? 0.0 : kPi);
      poly.spec.b.push_back(std::abs(c));
    }
    out.push_back(std::move(poly));
  }
  return out;
}

// Writes alpha_rs for a closed polygon configuration into `angles` (indexed
// by edge). thetas follow the linkage gauge with the last side at pi.
void write_polygon_angles(const Graph& g, const Polygon& poly, std::span<const double> thetas,
                          std::vector<double>& angles) {
  const double phi_t = poly.phase.back();
  for (std::size_t j = 0; j + 1 < poly.edges.size(); ++j) {
    const double alpha_rs = thetas[j] + phi_t - kPi - poly.phase[j];
    const int e = poly.edges[j];
    angles[uz(e)] = wrap_angle(g.edge(e).u == poly.r ? alpha_rs : -alpha_rs);
  }
}

std::vector<double> read_polygon_thetas(const Graph& g, const Polygon& poly, const std::vector<double>& angles) {
  const double phi_t = poly.phase.back();
  std::vector<double> thetas;
  for (std::size_t j = 0; j + 1 < poly.edges.size(); ++j) {
    const int e = poly.edges[j];
    const double alpha_rs = g.edge(e).u == poly.r ? angles[uz(e)] : -angles[uz(e)];
    thetas.push_back(wrap_angle(alpha_rs - phi_t + kPi + poly.phase[j]));
  }
  thetas.push_back(kPi);
  return thetas;
}

MagneticPoint point_from_edge_angles(const SupportPartition& part, const std::vector<double>& angles) {
  MagneticPoint p = zero_point(part.free_edges());
  for (std::size_t i = 0; i < p.free_edges.size(); ++i) p.angles[i] = wrap_angle(angles[uz(p.free_edges[i])]);
  return p;
}

// Gauss-Newton onto the closed configurations, minimum-norm steps.
bool project_polygon(std::span<const double> b, std::vector<double>& thetas) {
  double total = 0.0;
  for (double x : b) total += x;
  for (int it = 0; it < 100; ++it) {
    const cplx f = linkage_residual(b, thetas);
    if (std::abs(f) <= 1e-14 * total) return true;
    const RMatrix j = linkage_jacobian(b, thetas);
    // J^T (J J^T)^{-1} f
    double a = 0, c = 0, d = 0;
    for (std::size_t i = 0; i < j.cols(); ++i) {
      a += j(0, i) * j(0, i);
      c += j(0, i) * j(1, i);
      d += j(1, i) * j(1, i);
    }
    const double det = a * d - c * c;
    if (std::abs(det) < 1e-24 * total * total * total * total) return false;
    const double y0 = (d * f.real() - c * f.imag()) / det;
    const double y1 = (-c * f.real() + a * f.imag()) / det;
    for (std::size_t i = 0; i < j.cols(); ++i) thetas[i] -= j(0, i) * y0 + j(1, i) * y1;
  }
  return std::abs(linkage_residual(b, thetas)) <= 1e-12 * total;
}

int signed_nodal_surplus(const Graph& g, const CriticalData& data, const RMatrix& hn) {
  const auto sub = induced_subgraph(g, data.v_n);
  int count = 0;
  for (const Edge& e : sub.graph.edges())
    if (hn(uz(e.u), uz(e.v)) * data.psi_n[uz(e.u)] * data.psi_n[uz(e.v)] > 0.0) ++count;
  return count - (data.k_n - 1);
}

void note(GenericityReport& rep, const std::string& msg) {
  rep.passed = false;
  if (rep.failures.size() < kMaxFailures) rep.failures.push_back(msg);
}

std::string one_based(std::span<const int> vs) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? "," : "") << vs[i] + 1;
  os << "}";
  return os.str();
}

void check_subgraph(const BaseMatrix& h, const std::vector<int>& vs, GenericityReport& rep) {
  const auto sub = induced_subgraph(h.graph(), vs);
  const auto tree = bfs_spanning_forest(sub.graph);
  std::vector<char> in_tree(uz(sub.graph.edge_count()), 0);
  for (int e : tree) in_tree[uz(e)] = 1;
  std::vector<int> free_edges;
  for (int e = 0; e < sub.graph.edge_count(); ++e)
    if (!in_tree[uz(e)]) free_edges.push_back(e);
  if (free_edges.size() > 20) {
    rep.truncated = true;
    return;
  }
  const auto comp = sub.graph.component_ids();
  const RMatrix base = h.matrix().principal(vs);
  for (const Signing& s : enumerate_signings(free_edges, 20)) {
    RMatrix m = base;
    for (std::size_t i = 0; i < s.free_edges.size(); ++i)
      if (s.signs[i] < 0) {
        const Edge& e = sub.graph.edge(s.free_edges[i]);
        m(uz(e.u), uz(e.v)) = -m(uz(e.u), uz(e.v));
        m(uz(e.v), uz(e.u)) = -m(uz(e.v), uz(e.u));
      }
    ++rep.signings;
    const EigenSystem es = eig_sym(m);
    for (std::size_t k = 0; k < es.size(); ++k) {
      const double gap = std::min(es.gap_below[k], es.gap_above[k]) / es.scale();
      if (std::isfinite(gap)) rep.worst_gap = std::min(rep.worst_gap, gap);
      if (!es.is_simple(k)) {
        std::ostringstream os;
        os << "multiple eigenvalue " << es.values[k] << " on " << one_based(vs) << " signing " << s.bits();
        note(rep, os.str());
        continue;
      }
      const CVector v = es.vector(k);
      std::size_t top = 0;
      for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[top])) top = i;
      double inside = 1.0, outside = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (comp[i] == comp[top])
          inside = std::min(inside, std::abs(v[i]));
        else
          outside = std::max(outside, std::abs(v[i]));
      }
      rep.worst_entry = std::min(rep.worst_entry, inside);
      if (inside <= kSupportTol || outside > kSupportTol) {
        std::ostringstream os;
        os << "eigenvector " << k + 1 << " on " << one_based(vs) << " signing " << s.bits()
           << (inside <= kSupportTol ? " vanishes on its component" : " spreads over several components");
        note(rep, os.str());
      }
    }
  }
}

}  // namespace

std::string to_string(Extremum e) {
  switch (e) {
    case Extremum::Min: return "min";
    case Extremum::Max: return "max";
    case Extremum::Saddle: return "saddle";
    case Extremum::NotApplicable: return "n/a";
  }
  return "?";
}

std::optional<int> ManifoldReport::min_index() const {
  std::optional<int> out;
  for (const auto& s : samples)
    if (s.morse_index) out = out ? std::min(*out, *s.morse_index) : *s.morse_index;
  return out;
}

std::optional<int> ManifoldReport::max_index() const {
  std::optional<int> out;
  for (const auto& s : samples)
    if (s.morse_index) out = out ? std::max(*out, *s.morse_index) : *s.morse_index;
  return out;
}

GenericityReport check_genericity(const BaseMatrix& h, std::uint64_t subgraph_budget) {
  GenericityReport rep;
  rep.worst_gap = std::numeric_limits<double>::infinity();
  rep.worst_entry = 1.0;
  const Graph& g = h.graph();
  const int n = g.n();
  std::vector<std::vector<int>> subsets;
  if (n <= 12) {
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      if (rep.subgraphs >= subgraph_budget) {
        rep.truncated = true;
        break;
      }
      std::vector<int> vs;
      for (int v = 0; v < n; ++v)
        if (mask >> v & 1u) vs.push_back(v);
      ++rep.subgraphs;
      check_subgraph(h, vs, rep);
    }
    return rep;
  }
  std::set<std::vector<int>> seen;
  for (const auto& s : enumerate_admissible_supports(g)) {
    seen.insert(s);
    const auto part = partition_for_support(g, s);
    if (!part.v_zz.empty()) seen.insert(part.v_zz);
  }
  for (const auto& vs : seen) {
    if (rep.subgraphs >= subgraph_budget) {
      rep.truncated = true;
      break;
    }
    ++rep.subgraphs;
    check_subgraph(h, vs, rep);
  }
  return rep;
}

RMatrix signed_block(const BaseMatrix& h, const std::vector<int>& v_n, const Signing& signing_n) {
  const Graph& g = h.graph();
  std::vector<int> local(uz(g.n()), -1);
  for (std::size_t i = 0; i < v_n.size(); ++i) local[uz(v_n[i])] = static_cast<int>(i);
  RMatrix m = h.matrix().principal(v_n);
  for (std::size_t i = 0; i < signing_n.free_edges.size(); ++i) {
    if (signing_n.signs[i] > 0) continue;
    const Edge& e = g.edge(signing_n.free_edges[i]);
    const int a = local[uz(e.u)], b = local[uz(e.v)];
    if (a < 0 || b < 0) throw Error(ErrorKind::InvalidInput, "signed edge leaves the support");
    m(uz(a), uz(b)) = -m(uz(a), uz(b));
    m(uz(b), uz(a)) = -m(uz(b), uz(a));
  }
  return m;
}

std::vector<CriticalData> critical_data_for_support(const BaseMatrix& h, const std::vector<int>& v_n, bool strict) {
  const auto part = partition_for_support(h.graph(), v_n);
  std::vector<CriticalData> out;
  for (const Signing& s : enumerate_signings(part.free_nn)) {
    const RMatrix hn = signed_block(h, part.v_n, s);
    const EigenSystem es = eig_sym(hn);
    for (std::size_t k = 0; k < es.size(); ++k) {
      CriticalData d;
      d.v_n = part.v_n;
      d.signing_n = s;
      d.k_n = static_cast<int>(k) + 1;
      d.lambda = es.values[k];
      d.psi_n = real_vector(es, k);
      const double smallest = std::ranges::min(d.psi_n, {}, [](double x) { return std::abs(x); });
      if (!es.is_simple(k) || std::abs(smallest) <= kSupportTol) {
        if (!strict) continue;
        std::ostringstream os;
        os << "h is not generic: eigenpair " << k + 1 << " of the block on " << one_based(part.v_n) << " with signing "
           << s.bits() << (es.is_simple(k) ? " vanishes somewhere" : " is multiple");
        throw Error(ErrorKind::Genericity, os.str());
      }
      out.push_back(std::move(d));
    }
  }
  return out;
}

std::vector<CriticalData> enumerate_critical_data(const BaseMatrix& h, bool strict) {
  std::vector<CriticalData> out;
  for (const auto& s : enumerate_admissible_supports(h.graph())) {
    auto part = critical_data_for_support(h, s, strict);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

Extremum classify_extremum(const ManifoldReport& report, const ManifoldSample& sample) {
  if (!sample.morse_index) return Extremum::NotApplicable;
  const int n_zn = static_cast<int>(report.linkage_specs.size());
  const int k_n = report.data.k_n;
  if (report.sigma_n == 0 && sample.k == n_zn + sample.k_zz + k_n) return Extremum::Min;
  if (report.sigma_n == report.beta_n && sample.k == sample.k_zz + k_n) return Extremum::Max;
  return Extremum::Saddle;
}

ManifoldReport build_manifold(const BaseMatrix& h, const CriticalData& data, int samples, std::uint64_t seed) {
  const Graph& g = h.graph();
  const auto part = partition_for_support(g, data.v_n);
  if (data.psi_n.size() != part.v_n.size()) throw Error(ErrorKind::InvalidInput, "psi_N does not match the support");

  ManifoldReport rep;
  rep.data = data;
  const RMatrix hn = signed_block(h, part.v_n, data.signing_n);
  rep.beta_n = static_cast<int>(part.free_nn.size());
  rep.sigma_n = signed_nodal_surplus(g, data, hn);
  rep.codim = rep.beta_n + 2 * static_cast<int>(part.v_zn.size());

  const auto polys = polygons(h, part, data);
  rep.nonempty = true;
  rep.components = 1;
  bool zero_dim = part.free_zz.empty();
  for (const auto& poly : polys) {
    rep.linkage_specs.emplace_back(poly.r, poly.spec);
    const LinkageClass cls = classify(poly.spec);
    if (!cls.nonempty) rep.nonempty = false;
    rep.components *= std::max(cls.components, 1);
    if (poly.spec.b.size() > 3) zero_dim = false;
  }
  if (!rep.nonempty) {
    rep.dim = -1;
    rep.components = 0;
    return rep;
  }
  rep.dim = static_cast<int>(part.e_zn.size()) - 3 * static_cast<int>(part.v_zn.size()) +
            static_cast<int>(part.e_zz.size()) - static_cast<int>(part.v_zz.size());
  if (rep.dim + rep.codim != g.betti()) throw Error(ErrorKind::Verification, "dim + codim differs from beta(G)");

  std::vector<double> base_angles(uz(g.edge_count()), 0.0);
  for (std::size_t i = 0; i < data.signing_n.free_edges.size(); ++i)
    base_angles[uz(data.signing_n.free_edges[i])] = data.signing_n.signs[i] > 0 ? 0.0 : kPi;

  std::vector<std::vector<LinkagePoint>> solutions;
  for (std::size_t i = 0; i < polys.size(); ++i)
    solutions.push_back(sample_points(polys[i].spec, std::max(samples, 1), seed + 7919 * (i + 1)));

  std::vector<MagneticPoint> points;
  if (zero_dim && polys.size() <= uz(kFullEnumerationCap)) {
    const std::uint64_t total = std::uint64_t{1} << polys.size();
    for (std::uint64_t m = 0; m < total; ++m) {
      std::vector<double> angles = base_angles;
      for (std::size_t i = 0; i < polys.size(); ++i)
        write_polygon_angles(g, polys[i], solutions[i][(m >> i) & 1u].thetas, angles);
      MagneticPoint p = point_from_edge_angles(part, angles);
      const bool dup = std::ranges::any_of(points, [&](const MagneticPoint& q) { return torus_distance(p, q) < 1e-6; });
      if (!dup) points.push_back(std::move(p));
    }
  } else {
    Rng rng(seed);
    for (int t = 0; t < samples; ++t) {
      std::vector<double> angles = base_angles;
      for (std::size_t i = 0; i < polys.size(); ++i)
        write_polygon_angles(g, polys[i], solutions[i][rng.index(solutions[i].size())].thetas, angles);
      for (int e : part.free_zz) angles[uz(e)] = rng.angle();
      points.push_back(point_from_edge_angles(part, angles));
    }
  }

  CVector psi(uz(g.n()), 0.0);
  for (std::size_t i = 0; i < part.v_n.size(); ++i) psi[uz(part.v_n[i])] = data.psi_n[i];
  const int n_zn = static_cast<int>(part.v_zn.size());
  for (auto& p : points) {
    ManifoldSample s;
    const CMatrix ha = assemble(h, p);
    const EigenSystem es = eig_herm(ha);
    const auto hpsi = ha * std::span<const cplx>(psi);
    for (std::size_t i = 0; i < psi.size(); ++i) s.residual = std::max(s.residual, std::abs(hpsi[i] - data.lambda * psi[i]));
    if (s.residual > 1e-8 * h.scale()) {
      std::ostringstream os;
      os << "sampled point is not an eigenpair (residual " << s.residual << ")";
      throw Error(ErrorKind::Verification, os.str());
    }
    const double thr = es.zero_threshold();
    s.k = eigen_label(es.values, data.lambda, thr);
    s.simple = es.is_simple(uz(s.k - 1));
    if (!part.v_zz.empty()) {
      const auto zz = eigvals_herm(ha.principal(part.v_zz));
      double closest = std::numeric_limits<double>::infinity();
      for (double x : zz) closest = std::min(closest, std::abs(x - data.lambda));
      s.zz_resonant = closest <= thr;
      s.k_zz = eigen_label(zz, data.lambda, thr) - 1;
    }
    if (s.simple && !s.zz_resonant) s.morse_index = rep.sigma_n + 2 * n_zn - 2 * (s.k - s.k_zz - data.k_n);
    s.point = std::move(p);
    s.extremum = classify_extremum(rep, s);
    rep.samples.push_back(std::move(s));
  }
  return rep;
}

std::uint64_t count_3regular_points(const BaseMatrix& h, const CriticalData& data) {
  const Graph& g = h.graph();
  for (int v = 0; v < g.n(); ++v)
    if (g.degree(v) != 3) throw Error(ErrorKind::Precondition, "graph is not 3-regular");
  const auto part = partition_for_support(g, data.v_n);
  for (const auto& poly : polygons(h, part, data)) {
    const auto& b = poly.spec.b;
    const double longest = std::ranges::max(b);
    if (2.0 * longest >= b[0] + b[1] + b[2]) return 0;
  }
  return std::uint64_t{1} << (g.n() - static_cast<int>(data.v_n.size()));
}

std::optional<Projection> project_to_manifold(const BaseMatrix& h, const CriticalData& data, const MagneticPoint& p) {
  const Graph& g = h.graph();
  const auto part = partition_for_support(g, data.v_n);
  const MagneticPoint q = gauge_reduce(g, to_one_form(g, p), part);
  std::vector<double> angles(uz(g.edge_count()), 0.0);
  for (std::size_t i = 0; i < q.free_edges.size(); ++i) angles[uz(q.free_edges[i])] = q.angles[i];
  for (std::size_t i = 0; i < data.signing_n.free_edges.size(); ++i)
    angles[uz(data.signing_n.free_edges[i])] = data.signing_n.signs[i] > 0 ? 0.0 : kPi;
  for (const auto& poly : polygons(h, part, data)) {
    std::vector<double> thetas = read_polygon_thetas(g, poly, angles);
    // Unwrap near the start so the projection stays local.
    for (double& t : thetas) t = centered_angle(t - kPi) + kPi;
    if (!project_polygon(poly.spec.b, thetas)) return std::nullopt;
    write_polygon_angles(g, poly, thetas, angles);
  }
  Projection out;
  out.on_manifold = point_from_edge_angles(part, angles);
  out.distance = torus_distance(q, out.on_manifold);
  return out;
}

ExistenceInstance construct_existence_instance(const Graph& g, const std::vector<int>& v_n, const RMatrix& h_n, int k_n,
                                               const RMatrix& h_zn, const RMatrix& h_zz, double epsilon,
                                               std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidInput, "epsilon must be positive");
  const auto part = partition_for_support(g, v_n);
  const std::size_t nn = part.v_n.size(), nzn = part.v_zn.size(), nzz = part.v_zz.size();
  if (h_n.rows() != nn || h_n.cols() != nn || h_zn.rows() != nzn || h_zn.cols() != nzn || h_zz.rows() != nzz ||
      h_zz.cols() != nzz)
    throw Error(ErrorKind::InvalidInput, "block sizes do not match the support partition");
  if (k_n < 1 || uz(k_n) > nn) throw Error(ErrorKind::InvalidInput, "k_N out of range");

  const EigenSystem es_n = eig_sym(h_n);
  if (!es_n.is_simple(uz(k_n - 1))) throw Error(ErrorKind::Precondition, "lambda is not simple in h_N");
  CriticalData data;
  data.v_n = part.v_n;
  data.signing_n = enumerate_signings(part.free_nn).front();
  data.k_n = k_n;
  data.lambda = es_n.values[uz(k_n - 1)];
  data.psi_n = real_vector(es_n, uz(k_n - 1));
  for (double x : data.psi_n)
    if (std::abs(x) <= kSupportTol) throw Error(ErrorKind::Precondition, "eigenvector of h_N vanishes somewhere");

  const double lambda = data.lambda;
  auto clash_count = [&](const RMatrix& block, const char* name) {
    if (block.rows() == 0) return 0;
    const EigenSystem es = eig_sym(block);
    const double thr = 1e-9 * std::max(es.scale(), es_n.scale());
    int below = 0;
    for (double x : es.values) {
      if (std::abs(x - lambda) <= thr) {
        std::ostringstream os;
        os << "lambda = " << lambda << " lies in the spectrum of " << name;
        throw Error(ErrorKind::Precondition, os.str());
      }
      if (x < lambda) ++below;
    }
    return below;
  };
  const int k_zn = clash_count(h_zn, "h_ZN");
  const int k_zz = clash_count(h_zz, "h_ZZ");
  const int k = k_n + k_zn + k_zz;

  Rng rng(seed);
  const int n = g.n();
  std::vector<int> slot(uz(n), -1);
  for (std::size_t i = 0; i < nn; ++i) slot[uz(part.v_n[i])] = static_cast<int>(i);
  for (std::size_t i = 0; i < nzn; ++i) slot[uz(part.v_zn[i])] = static_cast<int>(i);
  for (std::size_t i = 0; i < nzz; ++i) slot[uz(part.v_zz[i])] = static_cast<int>(i);
  const auto& cls = part.vertex_class;

  // Coupling sides |H_rs psi_s| near 1, independent random values.
  RMatrix coupling(uz(n), uz(n));
  for (int e : part.e_zn) {
    const Edge& ed = g.edge(e);
    const int s = cls[uz(ed.u)] == 0 ? ed.u : ed.v;
    const double mag = (1.0 + 0.25 * rng.uniform()) / std::abs(data.psi_n[uz(slot[uz(s)])]);
    coupling(uz(ed.u), uz(ed.v)) = coupling(uz(ed.v), uz(ed.u)) = rng.coin() ? mag : -mag;
  }
  for (int e : part.e_zz) {
    const Edge& ed = g.edge(e);
    if (cls[uz(ed.u)] == cls[uz(ed.v)]) continue;
    const double mag = 0.5 + rng.uniform();
    coupling(uz(ed.u), uz(ed.v)) = coupling(uz(ed.v), uz(ed.u)) = rng.coin() ? mag : -mag;
  }

  auto block_of = [&](int c) -> const RMatrix& { return c == 0 ? h_n : c == 1 ? h_zn : h_zz; };
  auto assemble_real = [&](double eps, const RMatrix& jitter) {
    RMatrix m(uz(n), uz(n));
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) {
        const int cr = cls[uz(r)], cs = cls[uz(s)];
        m(uz(r), uz(s)) = cr == cs ? block_of(cr)(uz(slot[uz(r)]), uz(slot[uz(s)])) : eps * coupling(uz(r), uz(s));
        m(uz(r), uz(s)) += jitter(uz(r), uz(s));
      }
    return m;
  };

  // Tree-gauge point: signing all +, boundary polygons closed, Z angles 0.
  CriticalData unit = data;
  std::vector<double> angles(uz(g.edge_count()), 0.0);
  {
    const BaseMatrix shape(g, assemble_real(1.0, RMatrix(uz(n), uz(n))));
    const auto polys = polygons(shape, part, unit);
    for (std::size_t i = 0; i < polys.size(); ++i) {
      if (!classify(polys[i].spec).nonempty) throw Error(ErrorKind::Verification, "coupling polygon does not close");
      const auto sol = sample_points(polys[i].spec, 1, seed + 31 * (i + 1));
      write_polygon_angles(g, polys[i], sol.front().thetas, angles);
    }
  }
  const MagneticPoint point = point_from_edge_angles(part, angles);

  auto verify = [&](const BaseMatrix& hb) {
    const CMatrix ha = assemble(hb, point);
    const EigenSystem es = eig_herm(ha);
    const double thr = es.zero_threshold();
    if (eigen_label(es.values, lambda, thr) != k) return false;
    if (std::abs(es.values[uz(k - 1)] - lambda) > thr || !es.is_simple(uz(k - 1))) return false;
    if (!is_critical(hb, point, k).critical) return false;
    return vector_support(es.vector(uz(k - 1))) == part.v_n;
  };

  const RMatrix no_jitter(uz(n), uz(n));
  double eps = epsilon;
  for (int attempt = 0; attempt < 40; ++attempt, eps *= 0.5) {
    const BaseMatrix hb(g, assemble_real(eps, no_jitter));
    if (!verify(hb)) continue;
    // Jitter entries away from the N rows; (psi, 0) stays an exact eigenvector.
    RMatrix jitter(uz(n), uz(n));
    for (int r = 0; r < n; ++r)
      for (int s = r; s < n; ++s) {
        if (cls[uz(r)] == 0 || cls[uz(s)] == 0) continue;
        if (r != s && !g.has_edge(r, s)) continue;
        jitter(uz(r), uz(s)) = jitter(uz(s), uz(r)) = 1e-6 * eps * (2.0 * rng.uniform() - 1.0);
      }
    const BaseMatrix jittered(g, assemble_real(eps, jitter));
    ExistenceInstance out{verify(jittered) ? jittered : hb, point, k, k_zn, k_zz, eps, data};
    return out;
  }
  throw Error(ErrorKind::Verification, "no coupling strength keeps lambda simple with the prescribed label");
}

StabilityResult stability_probe(const BaseMatrix& h, const ManifoldReport& report, double delta, int trials,
                                std::uint64_t seed) {
  StabilityResult out;
  if (!report.nonempty) throw Error(ErrorKind::Precondition, "stability needs a nonempty manifold");
  const Graph& g = h.graph();
  Rng rng(seed);
  const CriticalData& d0 = report.data;
  const RMatrix hn0 = signed_block(h, d0.v_n, d0.signing_n);
  auto fail = [&](const std::string& msg) {
    out.passed = false;
    ++out.failures;
    if (out.messages.size() < kMaxFailures) out.messages.push_back(msg);
  };
  for (int t = 0; t < trials; ++t) {
    ++out.trials;
    RMatrix m = h.matrix();
    for (int v = 0; v < g.n(); ++v) m(uz(v), uz(v)) += delta * (2.0 * rng.uniform() - 1.0);
    for (const Edge& e : g.edges()) {
      const double x = m(uz(e.u), uz(e.v)) + delta * (2.0 * rng.uniform() - 1.0);
      m(uz(e.u), uz(e.v)) = m(uz(e.v), uz(e.u)) = x;
    }
    try {
      const BaseMatrix hp(g, m);
      const RMatrix hn = signed_block(hp, d0.v_n, d0.signing_n);
      out.max_block_shift = std::max(out.max_block_shift, (hn - hn0).max_abs());
      const EigenSystem es = eig_sym(hn);
      const std::size_t k = uz(d0.k_n - 1);
      CriticalData d = d0;
      d.lambda = es.values[k];
      d.psi_n = real_vector(es, k);
      double dot = 0.0;
      for (std::size_t i = 0; i < d.psi_n.size(); ++i) dot += d.psi_n[i] * d0.psi_n[i];
      if (dot < 0)
        for (double& x : d.psi_n) x = -x;
      out.max_lambda_shift = std::max(out.max_lambda_shift, std::abs(d.lambda - d0.lambda));
      const double smallest = std::ranges::min(d.psi_n, {}, [](double x) { return std::abs(x); });
      if (!es.is_simple(k) || std::abs(smallest) <= kSupportTol) {
        fail("perturbed block lost simplicity or a nonzero entry");
        continue;
      }
      const ManifoldReport r = build_manifold(hp, d, 4, seed + static_cast<std::uint64_t>(t));
      if (r.nonempty != report.nonempty || r.dim != report.dim || r.components != report.components) {
        std::ostringstream os;
        os << "trial " << t << ": (dim, components) changed from (" << report.dim << ", " << report.components
           << ") to (" << r.dim << ", " << r.components << ")";
        fail(os.str());
        continue;
      }
      for (const auto& s : r.samples)
        if (s.simple && !is_critical(hp, s.point, s.k).critical) fail("perturbed sample is not critical");
    } catch (const Error& e) {
      fail(std::string("trial failed: ") + e.what());
    }
  }
  return out;
}

}  // namespace magtorus
