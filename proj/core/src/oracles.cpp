#include "magtorus/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "magtorus/error.hpp"
#include "magtorus/parallel.hpp"
#include "magtorus/random.hpp"

namespace magtorus {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kVanishTol = 1e-6;  // entry counted as zero on a refined candidate

std::size_t uz(int x) { return static_cast<std::size_t>(x); }

MagneticPoint shifted(const MagneticPoint& p, std::span<const double> d) {
  MagneticPoint q = p;
  for (std::size_t i = 0; i < q.angles.size(); ++i) q.angles[i] = wrap_angle(q.angles[i] + d[i]);
  return q;
}

double lambda_on_stencil(const BaseMatrix& h, const MagneticPoint& p, int k) {
  const EigenSystem es = eig_herm(assemble(h, p));
  if (!es.is_simple(uz(k - 1))) throw Error(ErrorKind::Nonsmooth, "eigenvalue gap collapses on the stencil");
  return es.values[uz(k - 1)];
}

std::vector<double> central_gradient(const BaseMatrix& h, const MagneticPoint& p, int k, double step) {
  const std::size_t b = p.angles.size();
  std::vector<double> out(b), d(b, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    d[i] = step;
    const double plus = lambda_on_stencil(h, shifted(p, d), k);
    d[i] = -step;
    const double minus = lambda_on_stencil(h, shifted(p, d), k);
    d[i] = 0.0;
    out[i] = (plus - minus) / (2.0 * step);
  }
  return out;
}

RMatrix central_hessian(const BaseMatrix& h, const MagneticPoint& p, int k, double step) {
  const std::size_t b = p.angles.size();
  RMatrix out(b, b);
  const double f0 = lambda_on_stencil(h, p, k);
  std::vector<double> d(b, 0.0);
  auto at = [&](std::size_t i, double si, std::size_t j, double sj) {
    std::fill(d.begin(), d.end(), 0.0);
    d[i] += si;
    d[j] += sj;
    return lambda_on_stencil(h, shifted(p, d), k);
  };
  for (std::size_t i = 0; i < b; ++i) {
    out(i, i) = (at(i, step, i, 0.0) - 2.0 * f0 + at(i, -step, i, 0.0)) / (step * step);
    for (std::size_t j = i + 1; j < b; ++j) {
      const double v =
          (at(i, step, j, step) - at(i, step, j, -step) - at(i, -step, j, step) + at(i, -step, j, -step)) /
          (4.0 * step * step);
      out(i, j) = out(j, i) = v;
    }
  }
  return out;
}

struct GradientEval {
  std::vector<double> g;
  double norm2 = 0.0;
  double gap = 0.0;
  bool simple = false;
  CVector psi;
};

GradientEval evaluate(const BaseMatrix& h, const MagneticPoint& p, int k) {
  GradientEval out;
  const CMatrix ha = assemble(h, p);
  const EigenSystem es = eig_herm(ha);
  const std::size_t kk = uz(k - 1);
  out.gap = std::min(es.gap_below[kk], es.gap_above[kk]);
  out.simple = es.is_simple(kk);
  if (!out.simple) return out;
  const CVector psi = es.vector(kk);
  const Graph& g = h.graph();
  for (int e : p.free_edges) {
    const std::size_t r = uz(g.edge(e).u), s = uz(g.edge(e).v);
    const double x = -2.0 * (ha(r, s) * std::conj(psi[r]) * psi[s]).imag();
    out.g.push_back(x);
    out.norm2 += x * x;
  }
  out.psi = psi;
  return out;
}

RMatrix pinv_sym(const RMatrix& a) {
  const EigenSystem es = eig_sym(a);
  double top = 0.0;
  for (double x : es.values) top = std::max(top, std::abs(x));
  const std::size_t n = a.rows();
  RMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(es.values[k]) <= 1e-8 * std::max(top, 1e-300)) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += (es.vectors(i, k) * std::conj(es.vectors(j, k))).real() / es.values[k];
  }
  return out;
}

bool is_signing_point(const MagneticPoint& p) {
  for (double a : p.angles) {
    const double c = std::abs(centered_angle(a));
    if (c > 1e-6 && std::abs(c - kPi) > 1e-6) return false;
  }
  return true;
}

struct Refined {
  bool converged = false;
  bool nonsmooth = false;
  Candidate c;
};

Refined refine(const BaseMatrix& h, int k, MagneticPoint x, const GridOptions& opt) {
  Refined out;
  const std::size_t b = x.angles.size();
  constexpr double jac_step = 1e-6;
  GradientEval cur = evaluate(h, x, k);
  int it = 0;
  for (; it <= opt.max_iterations; ++it) {
    if (!cur.simple) break;
    // Polish well past the tolerance so vanishing entries read as zero.
    if (std::sqrt(cur.norm2) <= 1e-14 * h.scale() || it == opt.max_iterations) break;
    RMatrix jac(b, b);
    bool ok = true;
    std::vector<double> d(b, 0.0);
    for (std::size_t j = 0; j < b && ok; ++j) {
      d[j] = jac_step;
      const GradientEval gp = evaluate(h, shifted(x, d), k);
      d[j] = -jac_step;
      const GradientEval gm = evaluate(h, shifted(x, d), k);
      d[j] = 0.0;
      ok = gp.simple && gm.simple;
      if (ok)
        for (std::size_t i = 0; i < b; ++i) jac(i, j) = (gp.g[i] - gm.g[i]) / (2.0 * jac_step);
    }
    if (!ok) break;
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = i + 1; j < b; ++j) jac(i, j) = jac(j, i) = 0.5 * (jac(i, j) + jac(j, i));
    const std::vector<double> step = pinv_sym(jac) * std::span<const double>(cur.g);
    double t = 1.0;
    bool accepted = false;
    while (t > 1e-6) {
      std::vector<double> delta(b);
      for (std::size_t i = 0; i < b; ++i) delta[i] = -t * step[i];
      const MagneticPoint trial = shifted(x, delta);
      const GradientEval next = evaluate(h, trial, k);
      if (next.simple && next.norm2 <= (1.0 - 1e-4 * t) * cur.norm2) {
        x = trial;
        cur = next;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  out.converged = cur.simple && std::sqrt(cur.norm2) <= opt.refine_tol;
  out.c.point = std::move(x);
  out.c.gradient_norm = std::sqrt(cur.norm2);
  out.c.gap = cur.gap;
  out.c.iterations = it;
  if (!out.converged) {
    out.nonsmooth = cur.gap <= kSimpleRel * h.scale() * 10.0;
    out.c.kind = CandidateKind::Nonsmooth;
    return out;
  }
  if (is_signing_point(out.c.point))
    out.c.kind = CandidateKind::Signing;
  else if (std::ranges::any_of(cur.psi, [](cplx z) { return std::abs(z) <= kVanishTol; }))
    out.c.kind = CandidateKind::Manifold;
  else
    out.c.kind = CandidateKind::Unmatched;
  return out;
}

}  // namespace

std::vector<double> fd_gradient(const BaseMatrix& h, const MagneticPoint& p, int k, FdOptions opt) {
  lambda_on_stencil(h, p, k);
  auto g = central_gradient(h, p, k, opt.step);
  if (!opt.richardson) return g;
  const auto half = central_gradient(h, p, k, 0.5 * opt.step);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = (4.0 * half[i] - g[i]) / 3.0;
  return g;
}

RMatrix fd_hessian(const BaseMatrix& h, const MagneticPoint& p, int k, FdOptions opt) {
  RMatrix m = central_hessian(h, p, k, opt.step);
  if (!opt.richardson) return m;
  RMatrix half = central_hessian(h, p, k, 0.5 * opt.step);
  half *= 4.0;
  half -= m;
  half *= 1.0 / 3.0;
  return half;
}

Inertia fd_inertia(const RMatrix& hess, double rel) {
  if (hess.rows() == 0) return {};
  const EigenSystem es = eig_sym(hess);
  return inertia_of_values(es.values, rel * std::max(1.0, hess.max_abs()));
}

std::string to_string(CandidateKind kind) {
  switch (kind) {
    case CandidateKind::Signing: return "signing";
    case CandidateKind::Manifold: return "manifold";
    case CandidateKind::Nonsmooth: return "nonsmooth";
    case CandidateKind::Unmatched: return "unmatched";
  }
  return "?";
}

GridSearchResult grid_search_critical(const BaseMatrix& h, int k, GridOptions opt) {
  if (k < 1 || k > h.n()) throw Error(ErrorKind::InvalidInput, "eigenvalue label out of range");
  if (opt.resolution < 2) throw Error(ErrorKind::InvalidInput, "grid resolution must be at least 2");
  const auto free_edges = whole_graph_partition(h.graph()).free_edges();
  const int beta = static_cast<int>(free_edges.size());
  if (beta > 4) throw Error(ErrorKind::Precondition, "grid search needs beta <= 4");

  GridSearchResult out;
  out.k = k;
  out.resolution = opt.resolution;
  const std::size_t res = uz(opt.resolution);
  std::size_t total = 1;
  for (int i = 0; i < beta; ++i) total *= res;
  out.cells = total;

  auto grid_point = [&](std::size_t idx) {
    MagneticPoint p = zero_point(free_edges);
    for (int i = 0; i < beta; ++i) {
      p.angles[uz(i)] = 2.0 * kPi * static_cast<double>(idx % res) / static_cast<double>(res);
      idx /= res;
    }
    return p;
  };
  const auto values = parallel_map<double>(total, opt.threads, [&](std::size_t i) {
    const GradientEval e = evaluate(h, grid_point(i), k);
    return e.simple ? e.norm2 : std::numeric_limits<double>::quiet_NaN();
  });

  std::vector<std::size_t> seeds;
  for (std::size_t i = 0; i < total; ++i) {
    if (std::isnan(values[i])) continue;
    bool minimum = true;
    std::size_t stride = 1;
    for (int d = 0; d < beta && minimum; ++d, stride *= res) {
      const std::size_t digit = (i / stride) % res;
      for (std::size_t nd : {(digit + 1) % res, (digit + res - 1) % res}) {
        const std::size_t j = i - digit * stride + nd * stride;
        if (!std::isnan(values[j]) && values[j] < values[i]) minimum = false;
      }
    }
    if (minimum) seeds.push_back(i);
  }
  out.seeds = seeds.size();

  const auto refined =
      parallel_map<Refined>(seeds.size(), opt.threads, [&](std::size_t s) { return refine(h, k, grid_point(seeds[s]), opt); });
  for (const auto& r : refined) {
    if (!r.converged && !r.nonsmooth) {
      ++out.unconverged;
      continue;
    }
    const bool dup = std::ranges::any_of(out.candidates, [&](const Candidate& c) {
      return torus_distance(c.point, r.c.point) < 1e-6;
    });
    if (!dup) out.candidates.push_back(r.c);
  }
  return out;
}

ExhaustiveReport exhaustive_small_verify(const BaseMatrix& h) {
  const Graph& g = h.graph();
  if (g.n() > 8 || g.betti() > 3) throw Error(ErrorKind::Precondition, "exhaustive check needs n <= 8 and beta <= 3");
  ExhaustiveReport rep;
  rep.beta = g.betti();
  rep.histogram.assign(uz(g.n()), std::vector<std::uint64_t>(uz(rep.beta + 1), 0));
  for (const Signing& s : enumerate_signings(h)) {
    const MagneticPoint p = s.point();
    const CMatrix m = assemble(h, p);
    const EigenSystem es = eig_herm(m);
    for (int k = 1; k <= g.n(); ++k) {
      const CVector psi = es.vector(uz(k - 1));
      if (!es.is_simple(uz(k - 1)) || vector_support(psi).size() != uz(g.n())) {
        ++rep.skipped;
        continue;
      }
      const int sigma = nodal_surplus(g, m, psi, k);
      Inertia in;
      try {
        in = fd_inertia(fd_hessian(h, p, k));
      } catch (const Error&) {
        ++rep.skipped;
        continue;
      }
      ++rep.checked;
      if (sigma < 0 || sigma > rep.beta) {
        ++rep.mismatches;
        rep.messages.push_back("surplus out of range at signing " + s.bits());
        continue;
      }
      ++rep.histogram[uz(k - 1)][uz(sigma)];
      if (in.minus != sigma || in.zero != 0) {
        ++rep.mismatches;
        std::ostringstream os;
        os << "signing " << s.bits() << ", k = " << k << ": surplus " << sigma << ", Hessian index " << in.minus
           << ", nullity " << in.zero;
        if (rep.messages.size() < 32) rep.messages.push_back(os.str());
      }
    }
  }
  return rep;
}

}  // namespace magtorus
