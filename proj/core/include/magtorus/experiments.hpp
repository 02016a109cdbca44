#pragma once

// Signing sweeps on 3-regular graphs: nodal surplus histograms, their
// Kolmogorov-Smirnov distance to the standard normal, critical point census
// and band edges.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "magtorus/atlas.hpp"
#include "magtorus/graph.hpp"
#include "magtorus/magnetic.hpp"

namespace magtorus {

// Pairing model with rejection of loops, multi-edges and disconnected
// results. Deterministic per seed; n even and >= 4.
Graph random_3regular(int n, std::uint64_t seed);

// Adjacency plus diag(sqrt(2) s mod 1), s = 1..n.
RMatrix experiment_matrix(const Graph& g);

struct SurplusDistribution {
  int k = 0;
  std::vector<std::uint64_t> counts;  // index sigma = 0..beta
  std::uint64_t tallied = 0;
  std::uint64_t skipped = 0;  // multiple or vanishing eigenpairs
  double mean = 0.0, stddev = 0.0;
  std::optional<double> ks_distance;  // empty when stddev = 0
};

struct SweepResult {
  int n = 0, beta = 0;
  std::vector<SurplusDistribution> per_k;
  std::uint64_t total_tallied() const;
  std::uint64_t total_skipped() const;
};

SweepResult surplus_sweep(const BaseMatrix& h, int threads = 1, int signing_cap = kDefaultSigningCap);

// sup_x |F(x) - Phi(x)| for the empirical law of (sigma - mean) / stddev,
// evaluated on both one-sided limits of F at every atom. Empty for a point
// mass.
std::optional<double> ks_to_normal(const std::vector<std::uint64_t>& counts);

struct KsEntry {
  int n = 0, beta = 0;
  std::uint64_t seed = 0;
  double max_ks = 0.0;
  int argmax_k = 0;
  int excluded = 0;  // labels with stddev 0
};

KsEntry ks_summary(const SweepResult& sweep);

struct KsReport {
  std::vector<KsEntry> graphs;
  std::vector<SweepResult> sweeps;
};

// `graphs` random 3-regular graphs on n vertices with seeds seed, seed+1, ...
KsReport ks_report(int n, int graphs, std::uint64_t seed, int threads = 1);

struct CensusResult {
  std::vector<std::uint64_t> buckets;  // index |V \ V_N|
  std::uint64_t supports = 0;
  std::uint64_t data = 0;
  std::uint64_t feasible = 0;
  std::uint64_t skipped = 0;  // non-generic eigenpairs
  std::uint64_t total() const;
};

// 3-regular graphs only.
CensusResult cp_census(const BaseMatrix& h, int threads = 1);

struct BandWitness {
  MagneticPoint point;
  std::string source;  // "signing", "manifold" or "grid"
  Extremum extremum = Extremum::NotApplicable;
};

struct Band {
  int k = 0;
  double min = 0.0, max = 0.0;
  BandWitness at_min, at_max;
};

struct BandReport {
  std::vector<Band> bands;
  std::vector<std::pair<int, double>> gaps;  // (k, min_{k+1} - max_k) when positive
};

enum class BandMode { Atlas, Grid };

// Atlas mode takes extremes over the critical values of signings and
// manifold samples. Grid mode adds a scan of the torus (beta <= 4).
BandReport band_edges(const BaseMatrix& h, BandMode mode, int resolution = 32, int samples = 8,
                      std::uint64_t seed = 1);

}  // namespace magtorus
