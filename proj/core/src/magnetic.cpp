#include "magtorus/magnetic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>

#include "magtorus/error.hpp"
#include "magtorus/random.hpp"

namespace magtorus {

namespace {

constexpr cplx kI{0.0, 1.0};

std::size_t uz(int x) { return static_cast<std::size_t>(x); }

std::vector<int> complement_edges(const Graph& g, std::span<const int> free_edges) {
  std::vector<char> is_free(uz(g.edge_count()), 0);
  for (int e : free_edges) {
    if (e < 0 || e >= g.edge_count()) throw Error(ErrorKind::InvalidInput, "free edge index out of range");
    is_free[uz(e)] = 1;
  }
  std::vector<int> tree;
  for (int e = 0; e < g.edge_count(); ++e)
    if (!is_free[uz(e)]) tree.push_back(e);
  return tree;
}

}  // namespace

BaseMatrix::BaseMatrix(Graph g, RMatrix h) : graph_(std::move(g)), h_(std::move(h)) {
  const int n = graph_.n();
  if (!graph_.connected()) throw Error(ErrorKind::InvalidInput, "graph is not connected");
  if (h_.rows() != uz(n) || h_.cols() != uz(n)) throw Error(ErrorKind::InvalidInput, "matrix size does not match graph");
  const double tol = 1e-12 * std::max(1.0, h_.max_abs());
  for (int r = 0; r < n; ++r)
    for (int s = r + 1; s < n; ++s) {
      if (std::abs(h_(uz(r), uz(s)) - h_(uz(s), uz(r))) > tol) {
        std::ostringstream os;
        os << "matrix is not symmetric at (" << r + 1 << "," << s + 1 << ")";
        throw Error(ErrorKind::InvalidInput, os.str());
      }
      const bool edge = graph_.has_edge(r, s);
      const double x = std::abs(h_(uz(r), uz(s)));
      if (edge && x <= 1e-12) {
        std::ostringstream os;
        os << "entry (" << r + 1 << "," << s + 1 << ") vanishes on an edge";
        throw Error(ErrorKind::InvalidInput, os.str());
      }
      if (!edge && x > 1e-12) {
        std::ostringstream os;
        os << "entry (" << r + 1 << "," << s + 1 << ") is nonzero off the graph";
        throw Error(ErrorKind::InvalidInput, os.str());
      }
      if (!edge) h_(uz(r), uz(s)) = h_(uz(s), uz(r)) = 0.0;
    }
  scale_ = eig_sym(h_).scale();
}

double BaseMatrix::entry(int edge) const {
  const Edge& e = graph_.edge(edge);
  return h_(uz(e.u), uz(e.v));
}

MagneticPoint zero_point(std::span<const int> free_edges) {
  MagneticPoint p;
  p.free_edges.assign(free_edges.begin(), free_edges.end());
  std::sort(p.free_edges.begin(), p.free_edges.end());
  p.angles.assign(p.free_edges.size(), 0.0);
  return p;
}

OneForm to_one_form(const Graph& g, const MagneticPoint& p) {
  if (p.free_edges.size() != p.angles.size()) throw Error(ErrorKind::InvalidInput, "point has mismatched angle count");
  OneForm a;
  a.values.assign(uz(g.edge_count()), 0.0);
  for (std::size_t i = 0; i < p.free_edges.size(); ++i) {
    const int e = p.free_edges[i];
    if (e < 0 || e >= g.edge_count()) throw Error(ErrorKind::InvalidInput, "point does not belong to this graph");
    a.values[uz(e)] = p.angles[i];
  }
  return a;
}

OneForm exact_form(const Graph& g, std::span<const double> theta) {
  OneForm a;
  a.values.resize(uz(g.edge_count()));
  for (int e = 0; e < g.edge_count(); ++e) a.values[uz(e)] = theta[uz(g.edge(e).u)] - theta[uz(g.edge(e).v)];
  return a;
}

CMatrix assemble(const BaseMatrix& h, const OneForm& alpha) {
  const Graph& g = h.graph();
  if (alpha.values.size() != uz(g.edge_count())) throw Error(ErrorKind::InvalidInput, "one-form does not match graph");
  CMatrix out = to_complex(h.matrix());
  for (int e = 0; e < g.edge_count(); ++e) {
    const double a = alpha.values[uz(e)];
    if (a == 0.0) continue;
    const Edge& ed = g.edge(e);
    const cplx z = std::polar(1.0, a) * h.entry(e);
    out(uz(ed.u), uz(ed.v)) = z;
    out(uz(ed.v), uz(ed.u)) = std::conj(z);
  }
  return out;
}

CMatrix assemble(const BaseMatrix& h, const MagneticPoint& p) { return assemble(h, to_one_form(h.graph(), p)); }

MagneticPoint gauge_reduce(const Graph& g, const OneForm& alpha, std::span<const int> free_edges) {
  const int n = g.n();
  const std::vector<int> tree = complement_edges(g, free_edges);
  if (static_cast<int>(tree.size()) != n - 1) throw Error(ErrorKind::InvalidInput, "free edges do not complement a spanning tree");
  std::vector<std::vector<int>> tadj(uz(n));
  for (int e : tree) {
    tadj[uz(g.edge(e).u)].push_back(e);
    tadj[uz(g.edge(e).v)].push_back(e);
  }
  // alpha - d theta vanishes on the tree.
  std::vector<double> theta(uz(n), 0.0);
  std::vector<char> seen(uz(n), 0);
  seen[0] = 1;
  std::deque<int> q{0};
  int reached = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    for (int e : tadj[uz(v)]) {
      const int w = g.edge(e).u == v ? g.edge(e).v : g.edge(e).u;
      if (seen[uz(w)]) continue;
      seen[uz(w)] = 1;
      ++reached;
      const double a_vw = g.edge(e).u == v ? alpha.values[uz(e)] : -alpha.values[uz(e)];
      theta[uz(w)] = theta[uz(v)] - a_vw;
      q.push_back(w);
    }
  }
  if (reached != n) throw Error(ErrorKind::InvalidInput, "free edges do not complement a spanning tree");
  MagneticPoint p = zero_point(free_edges);
  for (std::size_t i = 0; i < p.free_edges.size(); ++i) {
    const int e = p.free_edges[i];
    p.angles[i] = wrap_angle(alpha.values[uz(e)] - theta[uz(g.edge(e).u)] + theta[uz(g.edge(e).v)]);
  }
  return p;
}

MagneticPoint gauge_reduce(const Graph& g, const OneForm& alpha, const SupportPartition& partition) {
  return gauge_reduce(g, alpha, partition.free_edges());
}

double flux(const OneForm& alpha, std::span<const int> cycle) {
  double s = 0.0;
  for (std::size_t e = 0; e < cycle.size(); ++e) s += cycle[e] * alpha.values[e];
  return s;
}

double torus_distance(const MagneticPoint& a, const MagneticPoint& b) {
  if (a.free_edges != b.free_edges) throw Error(ErrorKind::InvalidInput, "points are in different gauges");
  double s = 0.0;
  for (std::size_t i = 0; i < a.angles.size(); ++i) {
    const double d = centered_angle(a.angles[i] - b.angles[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

MagneticPoint Signing::point() const {
  MagneticPoint p;
  p.free_edges = free_edges;
  p.angles.resize(signs.size());
  for (std::size_t i = 0; i < signs.size(); ++i) p.angles[i] = signs[i] > 0 ? 0.0 : std::numbers::pi;
  return p;
}

std::string Signing::bits() const {
  std::string s;
  for (int x : signs) s.push_back(x > 0 ? '0' : '1');
  return s;
}

std::vector<Signing> enumerate_signings(std::span<const int> free_edges, int cap) {
  const int beta = static_cast<int>(free_edges.size());
  if (beta > cap) {
    std::ostringstream os;
    os << "2^" << beta << " signings exceeds the cap 2^" << cap;
    throw Error(ErrorKind::CapExceeded, os.str());
  }
  std::vector<Signing> out;
  const std::uint64_t total = std::uint64_t{1} << beta;
  out.reserve(total);
  for (std::uint64_t m = 0; m < total; ++m) {
    Signing s;
    s.free_edges.assign(free_edges.begin(), free_edges.end());
    s.signs.resize(uz(beta));
    for (int i = 0; i < beta; ++i) s.signs[uz(i)] = ((m >> (beta - 1 - i)) & 1U) ? -1 : 1;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Signing> enumerate_signings(const BaseMatrix& h, int cap) {
  const auto tree = bfs_spanning_forest(h.graph());
  std::vector<char> in_tree(uz(h.graph().edge_count()), 0);
  for (int e : tree) in_tree[uz(e)] = 1;
  std::vector<int> free_edges;
  for (int e = 0; e < h.graph().edge_count(); ++e)
    if (!in_tree[uz(e)]) free_edges.push_back(e);
  return enumerate_signings(free_edges, cap);
}

EigenPair eigenpair(const CMatrix& h, int k) {
  if (k < 1 || k > static_cast<int>(h.rows())) throw Error(ErrorKind::InvalidInput, "eigenvalue label out of range");
  const EigenSystem es = eig_herm(h);
  EigenPair ep;
  ep.k = k;
  ep.lambda = es.values[uz(k - 1)];
  ep.psi = es.vector(uz(k - 1));
  ep.simple = es.is_simple(uz(k - 1));
  ep.scale = es.scale();
  return ep;
}

EigenPair simple_eigenpair(const CMatrix& h, int k) {
  EigenPair ep = eigenpair(h, k);
  if (!ep.simple) {
    std::ostringstream os;
    os << "lambda_" << k << " = " << ep.lambda << " is not simple";
    throw Error(ErrorKind::Nonsmooth, os.str());
  }
  return ep;
}

std::vector<int> vector_support(std::span<const cplx> psi) {
  std::vector<int> s;
  for (std::size_t v = 0; v < psi.size(); ++v)
    if (std::abs(psi[v]) > kSupportTol) s.push_back(static_cast<int>(v));
  return s;
}

int eigen_label(std::span<const double> values, double lambda, double threshold) {
  int below = 0;
  for (double x : values)
    if (x < lambda - threshold) ++below;
  return below + 1;
}

double criticality_residual(const Graph& g, const CMatrix& h_alpha, std::span<const cplx> psi) {
  double r = 0.0;
  for (const Edge& e : g.edges())
    r = std::max(r, std::abs((h_alpha(uz(e.u), uz(e.v)) * std::conj(psi[uz(e.u)]) * psi[uz(e.v)]).imag()));
  return r;
}

int nodal_count(const Graph& g, const CMatrix& h_alpha, std::span<const cplx> psi, double tol) {
  if (tol < 0.0) tol = kZeroRel * std::max(1.0, h_alpha.max_abs() * std::sqrt(static_cast<double>(h_alpha.rows())));
  const double res = criticality_residual(g, h_alpha, psi);
  if (res > tol) {
    std::ostringstream os;
    os << "edge products are not real (residual " << res << ")";
    throw Error(ErrorKind::NotCritical, os.str());
  }
  int count = 0;
  for (const Edge& e : g.edges())
    if ((h_alpha(uz(e.u), uz(e.v)) * std::conj(psi[uz(e.u)]) * psi[uz(e.v)]).real() > 1e-12) ++count;
  return count;
}

int nodal_surplus(const Graph& g, const CMatrix& h_alpha, std::span<const cplx> psi, int k) {
  return nodal_count(g, h_alpha, psi) - (k - 1);
}

CriticalityResult is_critical(const BaseMatrix& h, const MagneticPoint& p, int k) {
  const CMatrix ha = assemble(h, p);
  const EigenPair ep = simple_eigenpair(ha, k);
  CriticalityResult r;
  r.residual = criticality_residual(h.graph(), ha, ep.psi);
  r.tolerance = kZeroRel * h.scale();
  r.critical = r.residual <= r.tolerance;
  return r;
}

OneForm gradient_full(const BaseMatrix& h, const MagneticPoint& p, int k) {
  const CMatrix ha = assemble(h, p);
  const EigenPair ep = simple_eigenpair(ha, k);
  const Graph& g = h.graph();
  OneForm out;
  out.values.resize(uz(g.edge_count()));
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    out.values[uz(e)] = -2.0 * (ha(uz(ed.u), uz(ed.v)) * std::conj(ep.psi[uz(ed.u)]) * ep.psi[uz(ed.v)]).imag();
  }
  return out;
}

std::vector<double> gradient(const BaseMatrix& h, const MagneticPoint& p, int k) {
  const OneForm full = gradient_full(h, p, k);
  std::vector<double> out;
  out.reserve(p.free_edges.size());
  for (int e : p.free_edges) out.push_back(full.values[uz(e)]);
  return out;
}

namespace {

// Column e: B applied to the unit one-form on edge e.
CMatrix b_operator(const Graph& g, const CMatrix& ha, std::span<const cplx> psi) {
  CMatrix b(uz(g.n()), uz(g.edge_count()));
  for (int e = 0; e < g.edge_count(); ++e) {
    const std::size_t r = uz(g.edge(e).u), s = uz(g.edge(e).v);
    b(r, uz(e)) = kI * ha(r, s) * psi[s];
    b(s, uz(e)) = -kI * ha(s, r) * psi[r];
  }
  return b;
}

CMatrix columns(const CMatrix& m, std::span<const int> cols) {
  CMatrix out(m.rows(), cols.size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(i, uz(cols[j]));
  return out;
}

RMatrix congruence(const RMatrix& q, const RMatrix& w) { return w.adjoint() * q * w; }

}  // namespace

HessianResult hessian(const BaseMatrix& h, const MagneticPoint& p, int k, const SupportPartition* partition) {
  const Graph& g = h.graph();
  const CMatrix ha = assemble(h, p);
  const EigenSystem es = eig_herm(ha);
  if (k < 1 || k > g.n()) throw Error(ErrorKind::InvalidInput, "eigenvalue label out of range");
  if (!es.is_simple(uz(k - 1))) {
    std::ostringstream os;
    os << "lambda_" << k << " is not simple";
    throw Error(ErrorKind::Nonsmooth, os.str());
  }
  const double lambda = es.values[uz(k - 1)];
  const CVector psi = es.vector(uz(k - 1));
  const double res = criticality_residual(g, ha, psi);
  if (res > kZeroRel * h.scale()) {
    std::ostringstream os;
    os << "point is not critical for lambda_" << k << " (residual " << res << ")";
    throw Error(ErrorKind::NotCritical, os.str());
  }

  const std::size_t m = uz(g.edge_count());
  CMatrix shifted = ha;
  for (std::size_t i = 0; i < shifted.rows(); ++i) shifted(i, i) -= lambda;
  const CMatrix rplus = pseudoinverse(shifted);
  const CMatrix b = b_operator(g, ha, psi);
  const CMatrix rb = rplus * b;

  HessianResult out;
  out.lambda = lambda;
  out.q_out = RMatrix(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      cplx s = 0.0;
      for (std::size_t r = 0; r < b.rows(); ++r) s += std::conj(b(r, i)) * rb(r, j);
      out.q_out(i, j) = out.q_out(j, i) = -2.0 * s.real();
    }
  out.q_in.resize(m);
  for (int e = 0; e < g.edge_count(); ++e) {
    const std::size_t r = uz(g.edge(e).u), s = uz(g.edge(e).v);
    out.q_in[uz(e)] = -2.0 * (ha(r, s) * std::conj(psi[r]) * psi[s]).real();
  }
  out.full = out.q_out;
  for (std::size_t i = 0; i < m; ++i) out.full(i, i) += out.q_in[i];
  out.free = out.full.principal(p.free_edges);

  if (partition == nullptr) return out;

  const SupportPartition& part = *partition;
  const std::vector<int> support = vector_support(psi);
  if (support != part.v_n) throw Error(ErrorKind::Precondition, "partition does not match the eigenvector support");

  BlockReport rep;
  rep.k = k;
  const double thr = es.zero_threshold();
  {
    const CMatrix hn = ha.principal(part.v_n);
    rep.k_n = eigen_label(eigvals_herm(hn), lambda, thr);
  }
  if (!part.v_zz.empty()) {
    const auto zz = eigvals_herm(ha.principal(part.v_zz));
    double closest = std::numeric_limits<double>::infinity();
    for (double x : zz) closest = std::min(closest, std::abs(x - lambda));
    if (closest <= thr) {
      std::ostringstream os;
      os << "lambda is in the spectrum of the ZZ block (distance " << closest << ")";
      throw Error(ErrorKind::DegenerateNormal, os.str());
    }
    rep.k_zz = eigen_label(zz, lambda, thr) - 1;
  }
  {
    int nu = 0;
    for (int e : part.e_nn) {
      const std::size_t r = uz(g.edge(e).u), s = uz(g.edge(e).v);
      if ((ha(r, s) * std::conj(psi[r]) * psi[s]).real() > 0.0) ++nu;
    }
    rep.sigma_n = nu - (rep.k_n - 1);
  }
  const int nzn = static_cast<int>(part.v_zn.size());
  const int nvn = static_cast<int>(part.v_n.size());
  rep.formula_index = rep.sigma_n + 2 * nzn - 2 * (k - rep.k_zz - rep.k_n);

  // Q_in on W_N = ker(B restricted to E_NN).
  {
    const CMatrix bn = columns(b, part.e_nn);
    const RMatrix w = nullspace_real(realify(bn));
    rep.w_n_dim = static_cast<int>(w.cols());
    RMatrix qin(part.e_nn.size(), part.e_nn.size());
    for (std::size_t i = 0; i < part.e_nn.size(); ++i) qin(i, i) = out.q_in[uz(part.e_nn[i])];
    rep.q_in_wn = w.cols() ? inertia(congruence(qin, w)) : Inertia{};
    rep.q_in_ok = rep.q_in_wn.minus == rep.sigma_n && rep.q_in_wn.zero == 0;
  }
  {
    const RMatrix qzn = out.q_out.principal(part.free_zn);
    rep.q_out_zn = part.free_zn.empty() ? Inertia{} : inertia(qzn);
    const int e_zn = static_cast<int>(part.e_zn.size());
    rep.q_out_zn_ok = rep.q_out_zn.minus == 2 * nzn - 2 * (k - rep.k_n - rep.k_zz) &&
                      rep.q_out_zn.zero == e_zn - 3 * nzn;
    rep.b_zn_rank = part.free_zn.empty() ? 0 : numerical_rank(svd_real(realify(columns(b, part.free_zn))));
    rep.b_rank_ok = rep.b_zn_rank == 2 * nzn;
  }
  {
    RMatrix d(m, uz(g.n()));
    for (int e = 0; e < g.edge_count(); ++e) {
      d(uz(e), uz(g.edge(e).u)) = 1.0;
      d(uz(e), uz(g.edge(e).v)) = -1.0;
    }
    RMatrix neg = congruence(out.q_out, d);
    neg *= -1.0;
    rep.neg_q_out_exact = inertia(neg);
    rep.exact_ok = rep.neg_q_out_exact.minus == rep.k_n - 1 &&
                   rep.neg_q_out_exact.plus + rep.neg_q_out_exact.minus == nvn - 1;
  }
  out.blocks = rep;
  return out;
}

}  // namespace magtorus
