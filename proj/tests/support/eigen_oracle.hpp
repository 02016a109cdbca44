#pragma once

// Independent reference computations built on Eigen.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "magtorus/linalg.hpp"

namespace oracle {

using magtorus::CMatrix;
using magtorus::Inertia;
using magtorus::RMatrix;

inline Eigen::MatrixXcd to_eigen(const CMatrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline Eigen::MatrixXd to_eigen(const RMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline CMatrix from_eigen(const Eigen::MatrixXcd& m) {
  CMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline Eigen::VectorXd eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline Eigen::VectorXd eigenvalues(const RMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Sign counts with the same relative zero policy as the library.
template <class M>
Inertia sign_counts(const M& h, double shift = 0.0) {
  Eigen::VectorXd ev = eigenvalues(h);
  ev.array() -= shift;
  const double radius = ev.cwiseAbs().maxCoeff();
  const double thr = 1e-9 * std::max(1.0, radius);
  Inertia in;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > thr)
      ++in.plus;
    else if (ev[i] < -thr)
      ++in.minus;
    else
      ++in.zero;
  }
  return in;
}

}  // namespace oracle
