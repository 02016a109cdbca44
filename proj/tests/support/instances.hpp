#pragma once

// Random test instances shared by the unit and acceptance tests.

#include <cmath>
#include <numbers>
#include <vector>

#include "magtorus/graph.hpp"
#include "magtorus/linalg.hpp"
#include "magtorus/magnetic.hpp"
#include "magtorus/random.hpp"

namespace inst {

using namespace magtorus;

inline CMatrix random_herm(Rng& rng, std::size_t n, double scale = 1.0) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = scale * rng.normal();
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = cplx(rng.normal(), rng.normal()) * scale;
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

inline CMatrix random_complex(Rng& rng, std::size_t r, std::size_t c) {
  CMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = cplx(rng.normal(), rng.normal());
  return m;
}

// Random unitary from Gram-Schmidt on a Gaussian matrix.
inline CMatrix random_unitary(Rng& rng, std::size_t n) {
  CMatrix q = random_complex(rng, n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      cplx dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, k)) * q(i, j);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(q(i, j));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= nrm;
  }
  return q;
}

// Hermitian with prescribed spectrum.
inline CMatrix with_spectrum(Rng& rng, const std::vector<double>& values) {
  const std::size_t n = values.size();
  const CMatrix u = random_unitary(rng, n);
  CMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = values[i];
  return u * d * u.adjoint();
}

// Integer-valued spectrum with a random number of zeros.
inline std::vector<double> random_spectrum(Rng& rng, std::size_t n, std::size_t zeros) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < zeros) {
      v[i] = 0.0;
    } else {
      const double mag = 0.5 + 3.0 * rng.uniform();
      v[i] = rng.coin() ? mag : -mag;
    }
  }
  return v;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).max_abs(); }

// Connected random graph: random spanning tree plus extra edges.
inline Graph random_connected_graph(Rng& rng, int n, int extra) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) edges.push_back({static_cast<int>(rng.index(static_cast<std::uint64_t>(v))), v});
  int added = 0, tries = 0;
  while (added < extra && tries < 1000) {
    ++tries;
    const int a = static_cast<int>(rng.index(static_cast<std::uint64_t>(n)));
    const int b = static_cast<int>(rng.index(static_cast<std::uint64_t>(n)));
    if (a == b) continue;
    bool dup = false;
    for (auto [x, y] : edges)
      if ((x == a && y == b) || (x == b && y == a)) dup = true;
    if (dup) continue;
    edges.push_back({a, b});
    ++added;
  }
  return Graph(n, edges);
}

// Generic-looking real symmetric matrix on g.
inline RMatrix random_supported(Rng& rng, const Graph& g) {
  const auto n = static_cast<std::size_t>(g.n());
  RMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) h(i, i) = rng.uniform(-2.0, 2.0);
  for (const Edge& e : g.edges()) {
    double x = rng.uniform(0.3, 1.5);
    if (rng.coin()) x = -x;
    h(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v)) = x;
    h(static_cast<std::size_t>(e.v), static_cast<std::size_t>(e.u)) = x;
  }
  return h;
}

inline RMatrix laplacian(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.n());
  RMatrix l(n, n);
  for (const Edge& e : g.edges()) {
    const auto u = static_cast<std::size_t>(e.u), v = static_cast<std::size_t>(e.v);
    l(u, u) += 1.0;
    l(v, v) += 1.0;
    l(u, v) = l(v, u) = -1.0;
  }
  return l;
}

// h = [[A, B], [B*, D]] with ker D inside ker B (B = C D).
struct BlockInstance {
  CMatrix a, b, d;
};

inline BlockInstance haynsworth_instance(Rng& rng, std::size_t na, std::size_t nd) {
  BlockInstance out;
  const std::size_t zeros = rng.index(nd + 1);
  out.a = random_herm(rng, na);
  out.d = with_spectrum(rng, random_spectrum(rng, nd, zeros));
  out.b = random_complex(rng, na, nd) * out.d;
  // Occasionally make A - B D^+ B* singular as well.
  if (rng.coin()) {
    const CMatrix schur = out.a - out.b * pseudoinverse(out.d) * out.b.adjoint();
    const EigenSystem es = eig_herm(schur);
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < na; ++j) out.a(i, j) -= es.values[0] * es.vectors(i, 0) * std::conj(es.vectors(j, 0));
  }
  return out;
}

struct CompressionInstance {
  CMatrix h;
  std::vector<int> v0;
  double lambda = 0.0;
};

// lambda is an eigenvalue of h whose eigenvector (0, x) vanishes on v0 and
// ker(D - lambda) = span x is contained in ker B.
inline CompressionInstance compression_instance(Rng& rng, std::size_t n, std::size_t n0) {
  const std::size_t n1 = n - n0;
  CompressionInstance out;
  out.lambda = rng.uniform(-2.0, 2.0);
  std::vector<double> spec(n1);
  spec[0] = out.lambda;
  for (std::size_t i = 1; i < n1; ++i) {
    double x;
    do x = rng.uniform(-4.0, 4.0);
    while (std::abs(x - out.lambda) < 0.2);
    spec[i] = x;
  }
  const CMatrix u = random_unitary(rng, n1);
  CMatrix diag(n1, n1);
  for (std::size_t i = 0; i < n1; ++i) diag(i, i) = spec[i];
  const CMatrix d = u * diag * u.adjoint();
  CMatrix proj = CMatrix::identity(n1);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j) proj(i, j) -= u(i, 0) * std::conj(u(j, 0));
  const CMatrix b = random_complex(rng, n0, n1) * proj;
  const CMatrix a = random_herm(rng, n0);
  out.h = CMatrix(n, n);
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n0; ++j) out.h(i, j) = a(i, j);
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n1; ++j) {
      out.h(i, n0 + j) = b(i, j);
      out.h(n0 + j, i) = std::conj(b(i, j));
    }
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j) out.h(n0 + i, n0 + j) = d(i, j);
  for (std::size_t i = 0; i < n0; ++i) out.v0.push_back(static_cast<int>(i));
  return out;
}

// Random real-linear surjection R^m -> C^n given by its n x m complex matrix.
inline CMatrix random_surjection(Rng& rng, std::size_t n, std::size_t m) { return random_complex(rng, n, m); }

// Random Hermitian with a random number of zero eigenvalues.
inline CMatrix random_herm_rank(Rng& rng, std::size_t n) {
  return with_spectrum(rng, random_spectrum(rng, n, rng.index(n + 1)));
}

}  // namespace inst
