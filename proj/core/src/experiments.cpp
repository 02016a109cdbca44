#include "magtorus/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "magtorus/error.hpp"
#include "magtorus/parallel.hpp"
#include "magtorus/random.hpp"

namespace magtorus {

namespace {

std::size_t uz(int x) { return static_cast<std::size_t>(x); }

void require_3regular(const Graph& g) {
  for (int v = 0; v < g.n(); ++v)
    if (g.degree(v) != 3) throw Error(ErrorKind::Precondition, "graph is not 3-regular");
}

}  // namespace

Graph random_3regular(int n, std::uint64_t seed) {
  if (n < 4 || n % 2 != 0) throw Error(ErrorKind::InvalidInput, "3-regular graphs need an even n >= 4");
  Rng rng(seed);
  std::vector<int> stubs(uz(3 * n));
  for (int i = 0; i < 3 * n; ++i) stubs[uz(i)] = i / 3;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (std::size_t i = stubs.size() - 1; i > 0; --i) std::swap(stubs[i], stubs[rng.index(i + 1)]);
    std::vector<std::pair<int, int>> edges;
    std::vector<char> used(uz(n * n), 0);
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size() && ok; i += 2) {
      const int a = std::min(stubs[i], stubs[i + 1]), b = std::max(stubs[i], stubs[i + 1]);
      if (a == b || used[uz(a * n + b)]) ok = false;
      else {
        used[uz(a * n + b)] = 1;
        edges.emplace_back(a, b);
      }
    }
    if (!ok) continue;
    std::sort(edges.begin(), edges.end());
    Graph g(n, edges);
    if (g.connected()) return g;
  }
  throw Error(ErrorKind::SamplingExhausted, "no simple connected pairing found");
}

RMatrix experiment_matrix(const Graph& g) {
  RMatrix h(uz(g.n()), uz(g.n()));
  for (const Edge& e : g.edges()) h(uz(e.u), uz(e.v)) = h(uz(e.v), uz(e.u)) = 1.0;
  for (int s = 1; s <= g.n(); ++s) h(uz(s - 1), uz(s - 1)) = std::fmod(std::numbers::sqrt2 * s, 1.0);
  return h;
}

std::uint64_t SweepResult::total_tallied() const {
  std::uint64_t t = 0;
  for (const auto& d : per_k) t += d.tallied;
  return t;
}

std::uint64_t SweepResult::total_skipped() const {
  std::uint64_t t = 0;
  for (const auto& d : per_k) t += d.skipped;
  return t;
}

std::optional<double> ks_to_normal(const std::vector<std::uint64_t>& counts) {
  double total = 0.0, sum = 0.0, sq = 0.0;
  for (std::size_t s = 0; s < counts.size(); ++s) {
    const double c = static_cast<double>(counts[s]);
    total += c;
    sum += c * static_cast<double>(s);
    sq += c * static_cast<double>(s) * static_cast<double>(s);
  }
  if (total == 0.0) return std::nullopt;
  const double mean = sum / total;
  const double var = std::max(0.0, sq / total - mean * mean);
  if (std::sqrt(var) <= 1e-12) return std::nullopt;
  const double sd = std::sqrt(var);
  double below = 0.0, sup = 0.0;
  for (std::size_t s = 0; s < counts.size(); ++s) {
    if (counts[s] == 0) continue;
    const double z = (static_cast<double>(s) - mean) / sd;
    const double phi = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    const double at = below + static_cast<double>(counts[s]) / total;
    sup = std::max({sup, std::abs(below - phi), std::abs(at - phi)});
    below = at;
  }
  return sup;
}

SweepResult surplus_sweep(const BaseMatrix& h, int threads, int signing_cap) {
  const Graph& g = h.graph();
  const auto signings = enumerate_signings(h, signing_cap);
  SweepResult out;
  out.n = g.n();
  out.beta = g.betti();
  // Per signing, the surplus for every k or -1 when skipped.
  const auto rows = parallel_map<std::vector<int>>(signings.size(), threads, [&](std::size_t i) {
    const CMatrix m = assemble(h, signings[i].point());
    const EigenSystem es = eig_herm(m);
    std::vector<int> sigma(uz(g.n()), -1);
    for (int k = 1; k <= g.n(); ++k) {
      const CVector psi = es.vector(uz(k - 1));
      if (!es.is_simple(uz(k - 1)) || vector_support(psi).size() != uz(g.n())) continue;
      sigma[uz(k - 1)] = nodal_surplus(g, m, psi, k);
    }
    return sigma;
  });
  out.per_k.resize(uz(g.n()));
  for (int k = 1; k <= g.n(); ++k) {
    auto& d = out.per_k[uz(k - 1)];
    d.k = k;
    d.counts.assign(uz(out.beta + 1), 0);
    for (const auto& row : rows) {
      const int s = row[uz(k - 1)];
      if (s < 0) {
        ++d.skipped;
        continue;
      }
      if (s > out.beta) throw Error(ErrorKind::Verification, "nodal surplus exceeds beta");
      ++d.counts[uz(s)];
      ++d.tallied;
    }
    if (d.tallied > 0) {
      double sum = 0.0, sq = 0.0;
      for (std::size_t s = 0; s < d.counts.size(); ++s) {
        sum += static_cast<double>(d.counts[s] * s);
        sq += static_cast<double>(d.counts[s] * s * s);
      }
      d.mean = sum / static_cast<double>(d.tallied);
      d.stddev = std::sqrt(std::max(0.0, sq / static_cast<double>(d.tallied) - d.mean * d.mean));
    }
    d.ks_distance = ks_to_normal(d.counts);
  }
  return out;
}

KsEntry ks_summary(const SweepResult& sweep) {
  KsEntry e;
  e.n = sweep.n;
  e.beta = sweep.beta;
  for (const auto& d : sweep.per_k) {
    if (!d.ks_distance) {
      ++e.excluded;
      continue;
    }
    if (*d.ks_distance > e.max_ks) {
      e.max_ks = *d.ks_distance;
      e.argmax_k = d.k;
    }
  }
  return e;
}

KsReport ks_report(int n, int graphs, std::uint64_t seed, int threads) {
  KsReport out;
  for (int i = 0; i < graphs; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    const Graph g = random_3regular(n, s);
    const BaseMatrix h(g, experiment_matrix(g));
    out.sweeps.push_back(surplus_sweep(h, threads));
    KsEntry e = ks_summary(out.sweeps.back());
    e.seed = s;
    out.graphs.push_back(e);
  }
  return out;
}

std::uint64_t CensusResult::total() const { return std::accumulate(buckets.begin(), buckets.end(), std::uint64_t{0}); }

CensusResult cp_census(const BaseMatrix& h, int threads) {
  const Graph& g = h.graph();
  require_3regular(g);
  const auto supports = admissible_supports_3regular(g);
  struct Part {
    std::vector<std::uint64_t> buckets;
    std::uint64_t data = 0, feasible = 0, skipped = 0;
  };
  const auto parts = parallel_map<Part>(supports.size(), threads, [&](std::size_t i) {
    Part p;
    p.buckets.assign(uz(g.n() + 1), 0);
    const auto& s = supports[i];
    const auto part = partition_for_support(g, s);
    const auto data = critical_data_for_support(h, s, false);
    const std::uint64_t possible = (std::uint64_t{1} << part.free_nn.size()) * s.size();
    p.skipped = possible - data.size();
    p.data = data.size();
    for (const auto& d : data) {
      const std::uint64_t c = count_3regular_points(h, d);
      if (c == 0) continue;
      ++p.feasible;
      p.buckets[uz(g.n()) - s.size()] += c;
    }
    return p;
  });
  CensusResult out;
  out.buckets.assign(uz(g.n() + 1), 0);
  out.supports = supports.size();
  for (const auto& p : parts) {
    for (std::size_t b = 0; b < p.buckets.size(); ++b) out.buckets[b] += p.buckets[b];
    out.data += p.data;
    out.feasible += p.feasible;
    out.skipped += p.skipped;
  }
  while (out.buckets.size() > 1 && out.buckets.back() == 0) out.buckets.pop_back();
  return out;
}

BandReport band_edges(const BaseMatrix& h, BandMode mode, int resolution, int samples, std::uint64_t seed) {
  const Graph& g = h.graph();
  const int n = g.n();
  const auto whole = whole_graph_partition(g);
  const auto free_edges = whole.free_edges();
  BandReport rep;
  rep.bands.resize(uz(n));
  for (int k = 1; k <= n; ++k) {
    rep.bands[uz(k - 1)].k = k;
    rep.bands[uz(k - 1)].min = std::numeric_limits<double>::infinity();
    rep.bands[uz(k - 1)].max = -std::numeric_limits<double>::infinity();
  }
  auto update = [&](int k, double value, const BandWitness& w) {
    Band& b = rep.bands[uz(k - 1)];
    if (value < b.min) {
      b.min = value;
      b.at_min = w;
    }
    if (value > b.max) {
      b.max = value;
      b.at_max = w;
    }
  };

  const int beta = g.betti();
  for (const Signing& s : enumerate_signings(h)) {
    const MagneticPoint p = s.point();
    const CMatrix m = assemble(h, p);
    const EigenSystem es = eig_herm(m);
    for (int k = 1; k <= n; ++k) {
      BandWitness w{p, "signing", Extremum::NotApplicable};
      const CVector psi = es.vector(uz(k - 1));
      if (es.is_simple(uz(k - 1)) && vector_support(psi).size() == uz(n)) {
        const int sigma = nodal_surplus(g, m, psi, k);
        w.extremum = sigma == 0 ? Extremum::Min : sigma == beta ? Extremum::Max : Extremum::Saddle;
      }
      update(k, es.values[uz(k - 1)], w);
    }
  }

  for (const auto& d : enumerate_critical_data(h, false)) {
    if (d.v_n.size() == uz(n)) continue;
    ManifoldReport r;
    try {
      r = build_manifold(h, d, samples, seed);
    } catch (const Error&) {
      continue;  // degenerate polygon: no reliable samples
    }
    for (const auto& s : r.samples) {
      const MagneticPoint p = gauge_reduce(g, to_one_form(g, s.point), free_edges);
      update(s.k, d.lambda, {p, "manifold", s.extremum});
    }
  }

  if (mode == BandMode::Grid) {
    if (beta > 4) throw Error(ErrorKind::Precondition, "grid band scan needs beta <= 4");
    const std::size_t res = uz(resolution);
    std::size_t total = 1;
    for (int i = 0; i < beta; ++i) total *= res;
    for (std::size_t idx = 0; idx < total; ++idx) {
      MagneticPoint p = zero_point(free_edges);
      std::size_t rest = idx;
      for (int i = 0; i < beta; ++i, rest /= res)
        p.angles[uz(i)] = 2.0 * std::numbers::pi * static_cast<double>(rest % res) / static_cast<double>(res);
      const auto values = eigvals_herm(assemble(h, p));
      for (int k = 1; k <= n; ++k) update(k, values[uz(k - 1)], {p, "grid", Extremum::NotApplicable});
    }
  }

  const double tol = 1e-12 * h.scale();
  for (int k = 1; k < n; ++k) {
    const double gap = rep.bands[uz(k)].min - rep.bands[uz(k - 1)].max;
    if (gap > tol) rep.gaps.emplace_back(k, gap);
  }
  return rep;
}

}  // namespace magtorus
