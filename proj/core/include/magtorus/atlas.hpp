#pragma once

// Critical submanifolds of eigenvalue functions on the magnetic torus.
//
// Each submanifold F is keyed by critical data: an admissible support V_N, a
// signing of h restricted to G_N, and a simple eigenpair (lambda, psi_N) of
// the signed block whose eigenvector is nowhere zero on V_N. On F the
// eigenvector is (psi_N, 0) and every boundary vertex r of V_ZN closes a
// planar polygon with sides |h_rs psi_s|.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "magtorus/graph.hpp"
#include "magtorus/linkage.hpp"
#include "magtorus/magnetic.hpp"

namespace magtorus {

struct CriticalData {
  std::vector<int> v_n;     // sorted
  Signing signing_n;        // over the free edges of G_N's tree (parent indices)
  int k_n = 0;              // label inside the signed block
  double lambda = 0.0;
  std::vector<double> psi_n;  // unit norm, parallel to v_n
};

enum class Extremum { Min, Max, Saddle, NotApplicable };
std::string to_string(Extremum e);

struct ManifoldSample {
  MagneticPoint point;  // gauge of the support partition
  int k = 0;
  int k_zz = 0;
  bool simple = false;
  bool zz_resonant = false;
  std::optional<int> morse_index;
  Extremum extremum = Extremum::NotApplicable;
  double residual = 0.0;  // |h_alpha psi - lambda psi|
};

struct ManifoldReport {
  CriticalData data;
  bool nonempty = false;
  int dim = 0, codim = 0;
  int components = 0;
  int sigma_n = 0;     // nodal surplus of psi_N in the signed block
  int beta_n = 0;      // first Betti number of G_N
  std::vector<std::pair<int, LinkageSpec>> linkage_specs;  // boundary vertex -> polygon
  std::vector<ManifoldSample> samples;
  std::optional<int> min_index() const;
  std::optional<int> max_index() const;
};

struct GenericityReport {
  bool passed = true;
  bool truncated = false;      // subgraph budget was reached
  std::uint64_t subgraphs = 0;
  std::uint64_t signings = 0;
  double worst_gap = 0.0;      // smallest eigenvalue gap / scale
  double worst_entry = 0.0;    // smallest |psi_v| on the supporting component
  std::vector<std::string> failures;  // capped at a few dozen
};

// Every induced subgraph (all of them when n <= 12, otherwise the G_N of
// admissible supports and their residual ZZ parts, up to subgraph_budget) and
// every signing of it: simple spectrum, and every eigenvector nowhere zero on
// exactly one connected component.
GenericityReport check_genericity(const BaseMatrix& h, std::uint64_t subgraph_budget = 1u << 20);

// The signed block h_N for a signing of G_N, as a real matrix on v_n.
RMatrix signed_block(const BaseMatrix& h, const std::vector<int>& v_n, const Signing& signing_n);

// Deterministic order: supports as enumerated, signings lexicographic, k_n
// ascending. Throws Error(Genericity) when an eigenpair of a signed block is
// multiple or vanishes somewhere; with strict = false such pairs are skipped.
std::vector<CriticalData> enumerate_critical_data(const BaseMatrix& h, bool strict = true);
std::vector<CriticalData> critical_data_for_support(const BaseMatrix& h, const std::vector<int>& v_n,
                                                    bool strict = true);

// Zero-dimensional manifolds are enumerated completely (deduplicated at
// torus distance 1e-6); otherwise `samples` random points are drawn.
ManifoldReport build_manifold(const BaseMatrix& h, const CriticalData& data, int samples, std::uint64_t seed);

Extremum classify_extremum(const ManifoldReport& report, const ManifoldSample& sample);

// 2^{n - |V_N|} when every polygon is a strict triangle, else 0.
std::uint64_t count_3regular_points(const BaseMatrix& h, const CriticalData& data);

// Distance from p (any gauge) to the manifold of `data`, measured in the
// partition gauge after snapping the G_N angles to the signing and projecting
// each boundary polygon onto its closed configurations. Empty when the
// polygon projection fails to converge.
struct Projection {
  MagneticPoint on_manifold;
  double distance = 0.0;
};
std::optional<Projection> project_to_manifold(const BaseMatrix& h, const CriticalData& data, const MagneticPoint& p);

struct ExistenceInstance {
  BaseMatrix h;
  MagneticPoint point;
  int k = 0;
  int k_zn = 0, k_zz = 0;
  double epsilon = 0.0;
  CriticalData data;
};

// Blocks are indexed by the sorted vertex lists of the support partition and
// must be real symmetric, supported on the induced subgraphs. lambda is the
// k_n-th eigenvalue of h_n. Throws Error(Precondition) on a spectral clash,
// Error(Verification) when no coupling strength works.
ExistenceInstance construct_existence_instance(const Graph& g, const std::vector<int>& v_n, const RMatrix& h_n, int k_n,
                                               const RMatrix& h_zn, const RMatrix& h_zz, double epsilon,
                                               std::uint64_t seed);

struct StabilityResult {
  bool passed = true;
  int trials = 0;
  int failures = 0;
  double max_lambda_shift = 0.0;
  double max_block_shift = 0.0;  // ||h_N' - h_N|| (max entry)
  std::vector<std::string> messages;
};

// Perturbs every nonzero entry by at most delta and rebuilds F from the same
// support and signing.
StabilityResult stability_probe(const BaseMatrix& h, const ManifoldReport& report, double delta, int trials,
                                std::uint64_t seed);

}  // namespace magtorus
