#pragma once

// Small dense linear algebra for Hermitian and real symmetric problems.
//
// Everything here is sized for matrices of at most a few hundred rows. The
// eigensolver is a cyclic complex Jacobi iteration; singular values of real
// rectangular matrices come from a one-sided (Hestenes) Jacobi sweep.
//
// Zero policy: an eigenvalue mu of an n x n Hermitian matrix counts as zero
// when |mu| <= kZeroRel * max(1, spectral radius). Simplicity of an
// eigenvalue requires both neighbouring gaps to exceed
// kSimpleRel * max(1, spectral radius).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace magtorus {

using cplx = std::complex<double>;

inline constexpr double kZeroRel = 1e-9;
inline constexpr double kSimpleRel = 1e-7;
inline constexpr double kPinvRel = 1e-10;
inline constexpr double kEigTolRel = 1e-10;

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<T> column(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  void set_column(std::size_t c, std::span<const T> values) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
  }

  const std::vector<T>& data() const noexcept { return data_; }

  Matrix adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) {
        if constexpr (std::is_same_v<T, cplx>)
          out(c, r) = std::conj((*this)(r, c));
        else
          out(c, r) = (*this)(r, c);
      }
    return out;
  }

  Matrix block(std::span<const int> row_idx, std::span<const int> col_idx) const {
    Matrix out(row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i)
      for (std::size_t j = 0; j < col_idx.size(); ++j)
        out(i, j) = (*this)(static_cast<std::size_t>(row_idx[i]), static_cast<std::size_t>(col_idx[j]));
    return out;
  }

  Matrix principal(std::span<const int> idx) const { return block(idx, idx); }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(T s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, T s) { return a *= s; }
  friend Matrix operator*(T s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T aik = a(i, k);
        if (aik == T{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend std::vector<T> operator*(const Matrix& a, std::span<const T> x) {
    std::vector<T> out(a.rows_, T{});
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * x[j];
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using CMatrix = Matrix<cplx>;
using RMatrix = Matrix<double>;
using CVector = std::vector<cplx>;

CMatrix to_complex(const RMatrix& m);
RMatrix real_part(const CMatrix& m);

bool is_hermitian(const CMatrix& m, double tol = 1e-12);

struct EigenSystem {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // orthonormal columns, column k pairs with values[k]
  std::vector<double> gap_below;
  std::vector<double> gap_above;
  double spectral_radius = 0.0;

  std::size_t size() const noexcept { return values.size(); }
  CVector vector(std::size_t k) const { return vectors.column(k); }
  double scale() const noexcept { return std::max(1.0, spectral_radius); }
  double zero_threshold() const noexcept { return kZeroRel * scale(); }
  bool is_simple(std::size_t k) const noexcept {
    return std::min(gap_below[k], gap_above[k]) > kSimpleRel * scale();
  }
};

// Throws Error(NotHermitian) when the input is not conjugate-symmetric.
EigenSystem eig_herm(const CMatrix& h);
EigenSystem eig_sym(const RMatrix& h);
std::vector<double> eigvals_herm(const CMatrix& h);

struct Inertia {
  int plus = 0;
  int minus = 0;
  int zero = 0;

  int dim() const noexcept { return plus + minus + zero; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

Inertia inertia_of_values(std::span<const double> values, double threshold);
Inertia inertia(const CMatrix& h, double shift = 0.0);
Inertia inertia(const RMatrix& h, double shift = 0.0);

// Moore-Penrose pseudoinverse of a Hermitian matrix. Eigenvalues with
// |mu| <= kPinvRel * max|mu| are treated as zero.
CMatrix pseudoinverse(const CMatrix& h);

struct RealSvd {
  std::vector<double> values;  // descending
  RMatrix v;                   // right singular vectors, columns match values
};

RealSvd svd_real(const RMatrix& a);
int numerical_rank(const RealSvd& svd, double rel = kPinvRel);
// Columns span the numerical null space (cutoff rel * sigma_max).
RMatrix nullspace_real(const RMatrix& a, double rel = kPinvRel);

// Realification of a real-linear map x -> B x with B complex n x m:
// returns the 2n x m matrix [Re B; Im B].
RMatrix realify(const CMatrix& b);

double determinant(RMatrix a);
double determinant_herm(const CMatrix& h);

struct CompressionCheck {
  Inertia compressed;  // inertia of R0(lambda), the compression of (h - lambda)^+ to v0
  Inertia full;        // inertia of h - lambda
  Inertia complement;  // inertia of D - lambda, D = h on the complement of v0
  bool identity_holds = false;
};

// Preconditions: lambda is an eigenvalue of h with an eigenvector vanishing
// on v0, and ker(D - lambda) is contained in ker B. Violations raise
// Error(Precondition) naming the failed hypothesis.
CompressionCheck spectral_shift_compression(const CMatrix& h, std::span<const int> v0, double lambda);

struct HaynsworthCheck {
  Inertia whole;
  Inertia d_block;
  Inertia schur;  // inertia of A - B D^+ B*
  bool identity_holds = false;
};

// h = [[A, B], [B*, D]]; requires ker D to be contained in ker B.
HaynsworthCheck haynsworth_inertia(const CMatrix& a, const CMatrix& b, const CMatrix& d);

struct RealFormCheck {
  Inertia form;       // inertia of Q(x, y) = Re <Bx, H By>
  Inertia predicted;  // (2 n+(H), 2 n-(H), 2 n0(H) + m - 2n)
  bool identity_holds = false;
};

// b_map is n x m complex; column j is the image of the j-th real basis vector.
// Throws Error(Precondition) with the computed real rank when not surjective.
RealFormCheck real_part_form_inertia(const CMatrix& h, const CMatrix& b_map);

RMatrix real_form_matrix(const CMatrix& h, const CMatrix& b_map);

}  // namespace magtorus
