#pragma once

// Finite-difference reference derivatives of lambda_k. The matrix is built
// here directly from the real entries and the eigenvalues come from Eigen, so
// nothing below goes through the library's assembly or eigensolver.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "magtorus/magnetic.hpp"

namespace fd {

using magtorus::BaseMatrix;
using magtorus::Inertia;
using magtorus::MagneticPoint;
using magtorus::RMatrix;

inline Eigen::VectorXd spectrum(const BaseMatrix& h, const std::vector<int>& free_edges,
                                const std::vector<double>& angles) {
  const auto& g = h.graph();
  const int n = g.n();
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = h.matrix()(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  for (std::size_t f = 0; f < free_edges.size(); ++f) {
    const auto& e = g.edge(free_edges[f]);
    const std::complex<double> z = std::polar(1.0, angles[f]) * h.matrix()(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v));
    m(e.u, e.v) = z;
    m(e.v, e.u) = std::conj(z);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double lambda(const BaseMatrix& h, const MagneticPoint& p, int k) {
  return spectrum(h, p.free_edges, p.angles)[k - 1];
}

inline double lambda_at(const BaseMatrix& h, const MagneticPoint& p, int k, const std::vector<double>& shift) {
  std::vector<double> a = p.angles;
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += shift[i];
  return spectrum(h, p.free_edges, a)[k - 1];
}

inline std::vector<double> gradient(const BaseMatrix& h, const MagneticPoint& p, int k, double step = 1e-5) {
  const std::size_t d = p.angles.size();
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> s(d, 0.0);
    s[i] = step;
    const double fp = lambda_at(h, p, k, s);
    s[i] = -step;
    const double fm = lambda_at(h, p, k, s);
    out[i] = (fp - fm) / (2 * step);
  }
  return out;
}

inline Eigen::MatrixXd hessian(const BaseMatrix& h, const MagneticPoint& p, int k, double step = 1e-4) {
  const std::size_t d = p.angles.size();
  Eigen::MatrixXd out(d, d);
  const double f0 = lambda(h, p, k);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> s(d, 0.0);
    s[i] = step;
    const double fp = lambda_at(h, p, k, s);
    s[i] = -step;
    const double fm = lambda_at(h, p, k, s);
    out(i, i) = (fp - 2 * f0 + fm) / (step * step);
    for (std::size_t j = i + 1; j < d; ++j) {
      std::vector<double> t(d, 0.0);
      t[i] = step; t[j] = step;
      const double fpp = lambda_at(h, p, k, t);
      t[j] = -step;
      const double fpm = lambda_at(h, p, k, t);
      t[i] = -step;
      const double fmm = lambda_at(h, p, k, t);
      t[j] = step;
      const double fmp = lambda_at(h, p, k, t);
      out(i, j) = out(j, i) = (fpp - fpm - fmp + fmm) / (4 * step * step);
    }
  }
  return out;
}

inline Inertia inertia(const Eigen::MatrixXd& m, double rel = 1e-5) {
  Inertia in;
  if (m.rows() == 0) return in;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double thr = rel * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double x = es.eigenvalues()[i];
    if (x > thr) ++in.plus;
    else if (x < -thr) ++in.minus;
    else ++in.zero;
  }
  return in;
}

// Gap of lambda_k to its neighbours at p.
inline double gap(const BaseMatrix& h, const MagneticPoint& p, int k) {
  const auto ev = spectrum(h, p.free_edges, p.angles);
  double g = 1e300;
  if (k > 1) g = std::min(g, ev[k - 1] - ev[k - 2]);
  if (k < ev.size()) g = std::min(g, ev[k] - ev[k - 1]);
  return g;
}

// Sign-change count on a real symmetric signing, straight from Eigen.
inline int surplus_at_signing(const BaseMatrix& h, const MagneticPoint& p, int k) {
  const auto& g = h.graph();
  const int n = g.n();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = h.matrix()(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  for (std::size_t f = 0; f < p.free_edges.size(); ++f) {
    const auto& e = g.edge(p.free_edges[f]);
    const double s = std::cos(p.angles[f]) > 0 ? 1.0 : -1.0;
    m(e.u, e.v) *= s;
    m(e.v, e.u) *= s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::VectorXd v = es.eigenvectors().col(k - 1);
  int nu = 0;
  for (const auto& e : g.edges())
    if (m(e.u, e.v) * v[e.u] * v[e.v] > 0) ++nu;
  return nu - (k - 1);
}

}  // namespace fd
