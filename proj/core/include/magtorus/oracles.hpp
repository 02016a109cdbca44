#pragma once

// Brute-force cross-checks: finite differences of lambda_k along the free
// edges, a torus grid search for critical points, and an exhaustive check of
// the signing index on small graphs.

#include <cstdint>
#include <string>
#include <vector>

#include "magtorus/magnetic.hpp"

namespace magtorus {

struct FdOptions {
  double step = 1e-5;
  bool richardson = false;  // combine steps h and h/2
};

// Derivatives along p.free_edges. Throws Error(Nonsmooth) when lambda_k stops
// being simple somewhere on the stencil.
std::vector<double> fd_gradient(const BaseMatrix& h, const MagneticPoint& p, int k, FdOptions opt = {});
RMatrix fd_hessian(const BaseMatrix& h, const MagneticPoint& p, int k, FdOptions opt = {1e-4, false});

// Inertia with the zero band 1e-5 * max(1, max |entry|), wide enough for
// second differences.
Inertia fd_inertia(const RMatrix& hess, double rel = 1e-5);

enum class CandidateKind { Signing, Manifold, Nonsmooth, Unmatched };
std::string to_string(CandidateKind kind);

struct Candidate {
  MagneticPoint point;  // whole-graph tree gauge
  double gradient_norm = 0.0;
  double gap = 0.0;     // distance from lambda_k to the rest of the spectrum
  int iterations = 0;
  CandidateKind kind = CandidateKind::Unmatched;
};

struct GridSearchResult {
  int k = 0;
  int resolution = 0;
  std::uint64_t cells = 0;
  std::uint64_t seeds = 0;
  std::uint64_t unconverged = 0;  // seeds dropped without a certificate
  std::vector<Candidate> candidates;
};

struct GridOptions {
  int resolution = 12;
  double refine_tol = 1e-8;
  int max_iterations = 50;
  int threads = 1;
};

// Requires beta <= 4. Seeds are grid points where |grad|^2 is a local minimum
// over the 2 beta neighbours; each is refined by damped Newton on the
// gradient. Candidates are deduplicated at torus distance 1e-6.
GridSearchResult grid_search_critical(const BaseMatrix& h, int k, GridOptions opt = {});

struct ExhaustiveReport {
  int beta = 0;
  std::uint64_t checked = 0;
  std::uint64_t skipped = 0;  // multiple or vanishing eigenpairs
  std::uint64_t mismatches = 0;
  std::vector<std::vector<std::uint64_t>> histogram;  // [k-1][sigma]
  std::vector<std::string> messages;
  bool passed() const { return mismatches == 0; }
};

// n <= 8, beta <= 3: for every signing and every k, nodal surplus against
// the finite-difference Hessian index, with zero nullity.
ExhaustiveReport exhaustive_small_verify(const BaseMatrix& h);

}  // namespace magtorus
