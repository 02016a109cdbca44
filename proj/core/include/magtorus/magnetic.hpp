#pragma once

// Magnetic perturbations h_alpha of a real symmetric matrix h supported on a
// graph: (h_alpha)_rs = e^{i alpha_rs} h_rs with alpha_sr = -alpha_rs.
// Angles are stored per edge (u,v), u < v, as alpha_uv.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "magtorus/graph.hpp"
#include "magtorus/linalg.hpp"

namespace magtorus {

class BaseMatrix {
 public:
  // Requires a connected graph, symmetry, and strict support:
  // |h_rs| > 1e-12 exactly on edges.
  BaseMatrix(Graph g, RMatrix h);

  const Graph& graph() const noexcept { return graph_; }
  const RMatrix& matrix() const noexcept { return h_; }
  int n() const noexcept { return graph_.n(); }
  double entry(int edge) const;
  // max(1, spectral radius of h), the scale for every tolerance.
  double scale() const noexcept { return scale_; }

 private:
  Graph graph_;
  RMatrix h_;
  double scale_ = 1.0;
};

// Per-edge values, orientation u < v.
struct OneForm {
  std::vector<double> values;
};

// A point of the torus in the gauge where every edge outside free_edges
// carries angle zero. free_edges is sorted.
struct MagneticPoint {
  std::vector<int> free_edges;
  std::vector<double> angles;  // parallel to free_edges, in [0, 2pi)
};

MagneticPoint zero_point(std::span<const int> free_edges);
OneForm to_one_form(const Graph& g, const MagneticPoint& p);
OneForm exact_form(const Graph& g, std::span<const double> theta);  // d theta

CMatrix assemble(const BaseMatrix& h, const OneForm& alpha);
CMatrix assemble(const BaseMatrix& h, const MagneticPoint& p);

// Representative with zero angles on the tree given by the complement of
// free_edges.
MagneticPoint gauge_reduce(const Graph& g, const OneForm& alpha, std::span<const int> free_edges);
MagneticPoint gauge_reduce(const Graph& g, const OneForm& alpha, const SupportPartition& partition);

// Flux of alpha through an oriented cycle (coefficient vector over edges).
double flux(const OneForm& alpha, std::span<const int> cycle);

// Euclidean distance on the torus between two points in the same gauge.
double torus_distance(const MagneticPoint& a, const MagneticPoint& b);

struct Signing {
  std::vector<int> free_edges;
  std::vector<int> signs;  // +1 / -1 per free edge
  MagneticPoint point() const;
  std::string bits() const;  // '0' for +1, '1' for -1
};

inline constexpr int kDefaultSigningCap = 26;

// All 2^beta signings in the whole-graph gauge, lexicographic in the sign
// vector with + before - and the first free edge most significant.
std::vector<Signing> enumerate_signings(const BaseMatrix& h, int cap = kDefaultSigningCap);
std::vector<Signing> enumerate_signings(std::span<const int> free_edges, int cap = kDefaultSigningCap);

struct EigenPair {
  int k = 0;  // 1-based label
  double lambda = 0.0;
  CVector psi;
  bool simple = false;
  double scale = 1.0;
};

// Throws Error(Nonsmooth) when lambda_k is not simple.
EigenPair simple_eigenpair(const CMatrix& h, int k);
EigenPair eigenpair(const CMatrix& h, int k);

// Vertices with |psi_v| > 1e-8 (psi unit norm).
std::vector<int> vector_support(std::span<const cplx> psi);

// 1 + number of eigenvalues below lambda - threshold.
int eigen_label(std::span<const double> values, double lambda, double threshold);

inline constexpr double kSupportTol = 1e-8;

// Largest |Im((h_alpha)_rs conj(psi_r) psi_s)| over edges.
double criticality_residual(const Graph& g, const CMatrix& h_alpha, std::span<const cplx> psi);

// Edges with Re((h_alpha)_rs conj(psi_r) psi_s) > 0. Throws Error(NotCritical)
// when the residual exceeds tol (default 1e-9 * scale).
int nodal_count(const Graph& g, const CMatrix& h_alpha, std::span<const cplx> psi, double tol = -1.0);

struct CriticalityResult {
  bool critical = false;
  double residual = 0.0;
  double tolerance = 0.0;
};

CriticalityResult is_critical(const BaseMatrix& h, const MagneticPoint& p, int k);

// Derivative along every edge direction (length |E|), and its restriction to
// the free edges of p.
OneForm gradient_full(const BaseMatrix& h, const MagneticPoint& p, int k);
std::vector<double> gradient(const BaseMatrix& h, const MagneticPoint& p, int k);

struct BlockReport {
  int k = 0, k_n = 0, k_zz = 0;
  int sigma_n = 0;
  int w_n_dim = 0;
  Inertia q_in_wn;
  Inertia q_out_zn;
  Inertia neg_q_out_exact;  // -Q_out on the exact forms d R^V
  int b_zn_rank = 0;
  int formula_index = 0;
  bool q_in_ok = false, q_out_zn_ok = false, exact_ok = false, b_rank_ok = false;
  bool consistent() const { return q_in_ok && q_out_zn_ok && exact_ok && b_rank_ok; }
};

struct HessianResult {
  double lambda = 0.0;
  RMatrix full;       // on all edge directions
  RMatrix free;       // restriction to the free edges of the point
  RMatrix q_out;      // full-edge outer part
  std::vector<double> q_in;  // diagonal of the inner part
  std::optional<BlockReport> blocks;
};

// Requires a critical point with simple lambda_k. When a partition is given it
// must be the partition of the eigenvector support; a ZZ-resonant point then
// raises Error(DegenerateNormal).
HessianResult hessian(const BaseMatrix& h, const MagneticPoint& p, int k,
                      const SupportPartition* partition = nullptr);

// nodal_count - (k - 1).
int nodal_surplus(const Graph& g, const CMatrix& h_alpha, std::span<const cplx> psi, int k);

}  // namespace magtorus
