#include "magtorus/linalg.hpp"

#include <limits>
#include <numeric>
#include <sstream>

#include "magtorus/error.hpp"

namespace magtorus {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupportCut = 1e-8;

double frobenius(const CMatrix& a) {
  double s = 0.0;
  for (const auto& x : a.data()) s += std::norm(x);
  return std::sqrt(s);
}

// Cyclic complex Jacobi. Overwrites a with a (numerically) diagonal matrix and
// accumulates the unitary in v when requested.
void jacobi_diagonalize(CMatrix& a, CMatrix* v) {
  const std::size_t n = a.rows();
  const double fro = frobenius(a);
  if (fro == 0.0 || n < 2) return;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-15 * fro) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx b = a(p, q);
        const double absb = std::abs(b);
        if (absb < 1e-300) continue;
        const cplx e = b / absb;
        const cplx ebar = std::conj(e);
        const double zeta = (a(q, q).real() - a(p, p).real()) / (2.0 * absb);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp - s * ebar * akq;
          a(k, q) = s * akp + c * ebar * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk - s * e * aqk;
          a(q, k) = s * apk + c * e * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (v != nullptr) {
          for (std::size_t k = 0; k < n; ++k) {
            const cplx vkp = (*v)(k, p);
            const cplx vkq = (*v)(k, q);
            (*v)(k, p) = c * vkp - s * ebar * vkq;
            (*v)(k, q) = s * vkp + c * ebar * vkq;
          }
        }
      }
    }
  }
}

void require_hermitian(const CMatrix& h) {
  if (!h.square()) throw Error(ErrorKind::NotHermitian, "matrix is not square");
  const double tol = 1e-12 * std::max(1.0, h.max_abs());
  if (!is_hermitian(h, tol)) throw Error(ErrorKind::NotHermitian, "matrix is not conjugate-symmetric");
}

void fill_gaps(EigenSystem& es) {
  const std::size_t n = es.values.size();
  es.gap_below.assign(n, kInf);
  es.gap_above.assign(n, kInf);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double g = es.values[k + 1] - es.values[k];
    es.gap_above[k] = g;
    es.gap_below[k + 1] = g;
  }
  es.spectral_radius = 0.0;
  for (double x : es.values) es.spectral_radius = std::max(es.spectral_radius, std::abs(x));
}

RMatrix realify_complex_linear(const CMatrix& a) {
  // Real matrix of the complex-linear map c -> a c acting on (Re c, Im c).
  RMatrix out(2 * a.rows(), 2 * a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx z = a(i, j);
      out(i, j) = z.real();
      out(i, j + a.cols()) = -z.imag();
      out(i + a.rows(), j) = z.imag();
      out(i + a.rows(), j + a.cols()) = z.real();
    }
  return out;
}

std::vector<int> complement_of(std::span<const int> subset, int n) {
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (int v : subset) {
    if (v < 0 || v >= n) throw Error(ErrorKind::InvalidInput, "index set out of range");
    in[static_cast<std::size_t>(v)] = 1;
  }
  std::vector<int> out;
  for (int v = 0; v < n; ++v)
    if (!in[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

double vec_norm(std::span<const cplx> x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

CMatrix to_complex(const RMatrix& m) {
  CMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

RMatrix real_part(const CMatrix& m) {
  RMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).real();
  return out;
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (!m.square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
  return true;
}

EigenSystem eig_herm(const CMatrix& h) {
  require_hermitian(h);
  const std::size_t n = h.rows();
  CMatrix a = h;
  CMatrix v = CMatrix::identity(n);
  jacobi_diagonalize(a, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenSystem es;
  es.values.resize(n);
  es.vectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    es.values[k] = a(order[k], order[k]).real();
    cplx phase = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx z = v(i, order[k]);
      if (std::abs(z) > 1e-8) {
        phase = std::conj(z) / std::abs(z);
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) = v(i, order[k]) * phase;
  }
  fill_gaps(es);
  return es;
}

EigenSystem eig_sym(const RMatrix& h) { return eig_herm(to_complex(h)); }

std::vector<double> eigvals_herm(const CMatrix& h) {
  require_hermitian(h);
  CMatrix a = h;
  jacobi_diagonalize(a, nullptr);
  std::vector<double> out(h.rows());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a(k, k).real();
  std::sort(out.begin(), out.end());
  return out;
}

Inertia inertia_of_values(std::span<const double> values, double threshold) {
  Inertia in;
  for (double x : values) {
    if (x > threshold)
      ++in.plus;
    else if (x < -threshold)
      ++in.minus;
    else
      ++in.zero;
  }
  return in;
}

Inertia inertia(const CMatrix& h, double shift) {
  CMatrix m = h;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= shift;
  const auto vals = eigvals_herm(m);
  double radius = 0.0;
  for (double x : vals) radius = std::max(radius, std::abs(x));
  return inertia_of_values(vals, kZeroRel * std::max(1.0, radius));
}

Inertia inertia(const RMatrix& h, double shift) { return inertia(to_complex(h), shift); }

CMatrix pseudoinverse(const CMatrix& h) {
  const EigenSystem es = eig_herm(h);
  const std::size_t n = h.rows();
  const double cut = kPinvRel * es.spectral_radius;
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double mu = es.values[k];
    if (std::abs(mu) <= cut || mu == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += es.vectors(i, k) * std::conj(es.vectors(j, k)) / mu;
  }
  return out;
}

RealSvd svd_real(const RMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  RMatrix u = a;
  RMatrix v = RMatrix::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += u(i, p) * u(i, p);
          beta += u(i, q) * u(i, q);
          gamma += u(i, p) * u(i, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double up = u(i, p), uq = u(i, q);
          u(i, p) = c * up - s * uq;
          u(i, q) = s * up + c * uq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += u(i, j) * u(i, j);
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });
  RealSvd out;
  out.values.resize(n);
  out.v = RMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = sigma[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, order[k]);
  }
  return out;
}

int numerical_rank(const RealSvd& svd, double rel) {
  if (svd.values.empty() || svd.values.front() == 0.0) return 0;
  const double cut = rel * svd.values.front();
  int r = 0;
  for (double s : svd.values)
    if (s > cut) ++r;
  return r;
}

RMatrix nullspace_real(const RMatrix& a, double rel) {
  const RealSvd svd = svd_real(a);
  const int rank = numerical_rank(svd, rel);
  const std::size_t n = a.cols();
  RMatrix out(n, n - static_cast<std::size_t>(rank));
  for (std::size_t k = static_cast<std::size_t>(rank); k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) out(i, k - static_cast<std::size_t>(rank)) = svd.v(i, k);
  return out;
}

RMatrix realify(const CMatrix& b) {
  RMatrix out(2 * b.rows(), b.cols());
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      out(i, j) = b(i, j).real();
      out(i + b.rows(), j) = b(i, j).imag();
    }
  return out;
}

double determinant(RMatrix a) {
  const std::size_t n = a.rows();
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (a(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

double determinant_herm(const CMatrix& h) {
  double det = 1.0;
  for (double x : eigvals_herm(h)) det *= x;
  return det;
}

CompressionCheck spectral_shift_compression(const CMatrix& h, std::span<const int> v0, double lambda) {
  require_hermitian(h);
  const int n = static_cast<int>(h.rows());
  const std::vector<int> v1 = complement_of(v0, n);
  const EigenSystem es = eig_herm(h);
  const double thr = es.zero_threshold();

  std::vector<std::size_t> eigenspace;
  for (std::size_t k = 0; k < es.size(); ++k)
    if (std::abs(es.values[k] - lambda) <= thr) eigenspace.push_back(k);
  if (eigenspace.empty()) {
    std::ostringstream os;
    os << "lambda=" << lambda << " is not an eigenvalue of h";
    throw Error(ErrorKind::Precondition, os.str());
  }
  if (!v0.empty()) {
    CMatrix restricted(v0.size(), eigenspace.size());
    for (std::size_t i = 0; i < v0.size(); ++i)
      for (std::size_t j = 0; j < eigenspace.size(); ++j)
        restricted(i, j) = es.vectors(static_cast<std::size_t>(v0[i]), eigenspace[j]);
    // Orthonormal columns, so an absolute cutoff applies.
    const RealSvd svd = svd_real(realify_complex_linear(restricted));
    if (svd.values.back() > kSupportCut)
      throw Error(ErrorKind::Precondition, "no eigenvector for lambda vanishes on v0");
  }

  const CMatrix d = h.principal(v1);
  const CMatrix b = h.block(v0, v1);
  if (!v1.empty()) {
    const EigenSystem ed = eig_herm(d);
    for (std::size_t k = 0; k < ed.size(); ++k) {
      if (std::abs(ed.values[k] - lambda) > thr) continue;
      const CVector x = ed.vector(k);
      const auto bx = b * std::span<const cplx>(x);
      if (vec_norm(bx) > 1e-8 * es.scale())
        throw Error(ErrorKind::Precondition, "ker(D - lambda I) is not contained in ker B");
    }
  }

  CMatrix shifted = h;
  for (int i = 0; i < n; ++i) shifted(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) -= lambda;
  const CMatrix r0 = pseudoinverse(shifted).principal(v0);

  CompressionCheck out;
  out.compressed = inertia(r0);
  out.full = inertia(h, lambda);
  out.complement = v1.empty() ? Inertia{} : inertia(d, lambda);
  out.identity_holds = out.compressed.plus == out.full.plus - out.complement.plus &&
                       out.compressed.minus == out.full.minus - out.complement.minus &&
                       out.compressed.zero == out.full.zero - out.complement.zero;
  return out;
}

HaynsworthCheck haynsworth_inertia(const CMatrix& a, const CMatrix& b, const CMatrix& d) {
  require_hermitian(a);
  require_hermitian(d);
  if (b.rows() != a.rows() || b.cols() != d.rows())
    throw Error(ErrorKind::InvalidInput, "block shapes do not match");
  const std::size_t na = a.rows(), nd = d.rows();
  CMatrix h(na + nd, na + nd);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) h(i, j) = a(i, j);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nd; ++j) {
      h(i, na + j) = b(i, j);
      h(na + j, i) = std::conj(b(i, j));
    }
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t j = 0; j < nd; ++j) h(na + i, na + j) = d(i, j);

  const EigenSystem ed = eig_herm(d);
  const double scale = std::max({1.0, ed.spectral_radius, b.max_abs()});
  for (std::size_t k = 0; k < ed.size(); ++k) {
    if (std::abs(ed.values[k]) > ed.zero_threshold()) continue;
    const CVector x = ed.vector(k);
    if (vec_norm(b * std::span<const cplx>(x)) > 1e-8 * scale)
      throw Error(ErrorKind::Precondition, "ker D is not contained in ker B");
  }

  const CMatrix schur = a - b * pseudoinverse(d) * b.adjoint();
  HaynsworthCheck out;
  out.whole = inertia(h);
  out.d_block = inertia(d);
  out.schur = inertia(schur);
  out.identity_holds = out.whole.plus == out.d_block.plus + out.schur.plus &&
                       out.whole.minus == out.d_block.minus + out.schur.minus &&
                       out.whole.zero == out.d_block.zero + out.schur.zero;
  return out;
}

RMatrix real_form_matrix(const CMatrix& h, const CMatrix& b_map) {
  const CMatrix hb = h * b_map;
  const std::size_t m = b_map.cols();
  RMatrix q(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      cplx s = 0.0;
      for (std::size_t r = 0; r < h.rows(); ++r) s += std::conj(b_map(r, i)) * hb(r, j);
      q(i, j) = s.real();
    }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double avg = 0.5 * (q(i, j) + q(j, i));
      q(i, j) = q(j, i) = avg;
    }
  return q;
}

RealFormCheck real_part_form_inertia(const CMatrix& h, const CMatrix& b_map) {
  require_hermitian(h);
  const int n = static_cast<int>(h.rows());
  const int m = static_cast<int>(b_map.cols());
  if (static_cast<int>(b_map.rows()) != n) throw Error(ErrorKind::InvalidInput, "b_map has the wrong number of rows");
  const int rank = numerical_rank(svd_real(realify(b_map)));
  if (rank != 2 * n) {
    std::ostringstream os;
    os << "b_map is not surjective: real rank " << rank << " < " << 2 * n;
    throw Error(ErrorKind::Precondition, os.str());
  }
  const Inertia ih = inertia(h);
  RealFormCheck out;
  out.form = inertia(real_form_matrix(h, b_map));
  out.predicted = Inertia{2 * ih.plus, 2 * ih.minus, 2 * ih.zero + m - 2 * n};
  out.identity_holds = out.form == out.predicted;
  return out;
}

}  // namespace magtorus
