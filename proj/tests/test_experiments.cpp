#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "magtorus/error.hpp"
#include "magtorus/experiments.hpp"
#include "magtorus/oracles.hpp"
#include "support/fd.hpp"
#include "support/fixtures.hpp"
#include "support/instances.hpp"

using namespace magtorus;

namespace {

constexpr double kPi = std::numbers::pi;

// Dense scan of |F - Phi| with F taken on both sides of each atom.
double ks_by_scan(const std::vector<std::uint64_t>& counts) {
  double total = 0.0, mean = 0.0;
  for (std::size_t s = 0; s < counts.size(); ++s) {
    total += static_cast<double>(counts[s]);
    mean += static_cast<double>(counts[s] * s);
  }
  mean /= total;
  double var = 0.0;
  for (std::size_t s = 0; s < counts.size(); ++s)
    var += static_cast<double>(counts[s]) * (static_cast<double>(s) - mean) * (static_cast<double>(s) - mean);
  const double sd = std::sqrt(var / total);
  auto cdf = [&](double x) {
    double c = 0.0;
    for (std::size_t s = 0; s < counts.size(); ++s)
      if (static_cast<double>(s) <= x) c += static_cast<double>(counts[s]);
    return c / total;
  };
  double sup = 0.0;
  for (double x = -1.0; x <= static_cast<double>(counts.size()); x += 1e-4) {
    const double phi = 0.5 * std::erfc(-(x - mean) / sd / std::numbers::sqrt2);
    sup = std::max(sup, std::abs(cdf(x) - phi));
  }
  for (std::size_t s = 0; s < counts.size(); ++s) {
    const double phi = 0.5 * std::erfc(-(static_cast<double>(s) - mean) / sd / std::numbers::sqrt2);
    sup = std::max({sup, std::abs(cdf(static_cast<double>(s)) - phi), std::abs(cdf(static_cast<double>(s) - 1e-9) - phi)});
  }
  return sup;
}

std::vector<double> cycle_band_oracle(int n, int k, int steps) {
  double lo = 1e300, hi = -1e300;
  for (int t = 0; t <= steps; ++t) {
    const double phi = 2 * kPi * t / steps;
    std::vector<double> v;
    for (int j = 0; j < n; ++j) v.push_back(2 - 2 * std::cos((2 * kPi * j + phi) / n));
    std::sort(v.begin(), v.end());
    lo = std::min(lo, v[static_cast<std::size_t>(k - 1)]);
    hi = std::max(hi, v[static_cast<std::size_t>(k - 1)]);
  }
  return {lo, hi};
}

}  // namespace

TEST_CASE("random 3-regular graphs") {
  for (int n : {4, 6, 10, 16}) {
    const Graph g = random_3regular(n, 7);
    CHECK(g.n() == n);
    CHECK(g.edge_count() == 3 * n / 2);
    CHECK(g.connected());
    CHECK(g.betti() == n / 2 + 1);
    for (int v = 0; v < n; ++v) CHECK(g.degree(v) == 3);
    const Graph again = random_3regular(n, 7);
    for (int e = 0; e < g.edge_count(); ++e) {
      CHECK(g.edges()[e].u == again.edges()[e].u);
      CHECK(g.edges()[e].v == again.edges()[e].v);
    }
  }
  CHECK_THROWS_AS(random_3regular(7, 1), Error);
  CHECK_THROWS_AS(random_3regular(2, 1), Error);
}

TEST_CASE("experiment matrix") {
  const Graph g = fixtures::k4();
  const RMatrix h = experiment_matrix(g);
  CHECK(h(0, 0) == doctest::Approx(0.41421356237309515));
  CHECK(h(1, 1) == doctest::Approx(0.8284271247461903));
  CHECK(h(2, 2) == doctest::Approx(0.2426406871192857));
  CHECK(h(3, 3) == doctest::Approx(0.6568542494923806));
  CHECK(h(0, 1) == 1.0);
  CHECK(h(2, 3) == 1.0);
}

TEST_CASE("surplus sweep") {
  Rng rng(11);
  SUBCASE("matches the reference surplus") {
    const Graph g = inst::random_connected_graph(rng, 7, 3);
    const BaseMatrix h(g, inst::random_supported(rng, g));
    const auto sweep = surplus_sweep(h);
    std::vector<std::vector<std::uint64_t>> ref(7, std::vector<std::uint64_t>(4, 0));
    for (const auto& s : enumerate_signings(h))
      for (int k = 1; k <= 7; ++k) ++ref[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(fd::surplus_at_signing(h, s.point(), k))];
    CHECK(sweep.total_skipped() == 0);
    for (int k = 1; k <= 7; ++k) CHECK(sweep.per_k[static_cast<std::size_t>(k - 1)].counts == ref[static_cast<std::size_t>(k - 1)]);
  }
  SUBCASE("disjoint cycles give a binomial law") {
    const Graph g = fixtures::chain_of_triangles();
    const auto sweep = surplus_sweep(BaseMatrix(g, inst::random_supported(rng, g)), 2);
    CHECK(sweep.beta == 3);
    CHECK(sweep.total_tallied() + sweep.total_skipped() == 9u * 8u);
    for (const auto& d : sweep.per_k) {
      CHECK(d.counts == std::vector<std::uint64_t>{1, 3, 3, 1});
      CHECK(d.mean == doctest::Approx(1.5));
      CHECK(d.stddev == doctest::Approx(std::sqrt(0.75)));
    }
  }
  SUBCASE("threads agree") {
    const Graph g = random_3regular(10, 3);
    const BaseMatrix h(g, experiment_matrix(g));
    const auto one = surplus_sweep(h, 1), many = surplus_sweep(h, 3);
    CHECK(one.total_tallied() + one.total_skipped() == 10u * 64u);
    for (std::size_t k = 0; k < one.per_k.size(); ++k) CHECK(one.per_k[k].counts == many.per_k[k].counts);
  }
  SUBCASE("a tree has no spread") {
    const Graph g = fixtures::path(5);
    const auto sweep = surplus_sweep(BaseMatrix(g, inst::random_supported(rng, g)));
    for (const auto& d : sweep.per_k) CHECK_FALSE(d.ks_distance.has_value());
    CHECK(ks_summary(sweep).excluded == 5);
  }
}

TEST_CASE("Kolmogorov-Smirnov distance") {
  CHECK_FALSE(ks_to_normal({0, 5, 0}).has_value());
  CHECK_FALSE(ks_to_normal({0, 0}).has_value());
  for (const auto& counts : std::vector<std::vector<std::uint64_t>>{{1, 1}, {1, 3, 3, 1}, {1, 2, 1}, {5, 0, 2, 9}, {1, 10, 45, 120, 210, 252, 210, 120, 45, 10, 1}}) {
    const auto ks = ks_to_normal(counts);
    REQUIRE(ks.has_value());
    CHECK(*ks == doctest::Approx(ks_by_scan(counts)).epsilon(1e-6));
  }
  // Two equal atoms at -1 and 1: the jump at 1 straddles Phi(1).
  const double phi1 = 0.5 * std::erfc(-1.0 / std::numbers::sqrt2);
  CHECK(*ks_to_normal({1, 0, 1}) == doctest::Approx(std::max(phi1 - 0.5, 0.5 - (1 - phi1))));
}

TEST_CASE("KS report") {
  const auto rep = ks_report(10, 2, 5);
  REQUIRE(rep.graphs.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(rep.graphs[i].seed == 5 + i);
    CHECK(rep.graphs[i].beta == 6);
    CHECK(rep.graphs[i].max_ks > 0.0);
    CHECK(rep.graphs[i].max_ks < 1.0);
    CHECK(rep.sweeps[i].total_tallied() + rep.sweeps[i].total_skipped() == 640u);
  }
}

TEST_CASE("critical point census") {
  Rng rng(17);
  SUBCASE("K4 against grid search") {
    BaseMatrix h(fixtures::k4(), inst::random_supported(rng, fixtures::k4()));
    while (!check_genericity(h).passed) h = BaseMatrix(fixtures::k4(), inst::random_supported(rng, fixtures::k4()));
    const auto census = cp_census(h);
    REQUIRE(!census.buckets.empty());
    CHECK(census.buckets[0] == 32u);
    std::uint64_t found = 0;
    for (int k = 1; k <= 4; ++k)
      for (const auto& c : grid_search_critical(h, k, {.resolution = 24}).candidates)
        if (c.kind == CandidateKind::Signing || c.kind == CandidateKind::Manifold) ++found;
    CHECK(found == census.total());
  }
  SUBCASE("signing bucket on a larger graph") {
    const Graph g = random_3regular(8, 2);
    const auto census = cp_census(BaseMatrix(g, experiment_matrix(g)), 2);
    CHECK(census.buckets[0] == 8u * 32u);
    CHECK(census.supports > 1u);
  }
  CHECK_THROWS_AS(cp_census(BaseMatrix(fixtures::path(4), inst::laplacian(fixtures::path(4)))), Error);
}

TEST_CASE("band edges") {
  SUBCASE("cycle Laplacian") {
    const Graph g = fixtures::cycle(6);
    const auto rep = band_edges(BaseMatrix(g, inst::laplacian(g)), BandMode::Grid, 32);
    CHECK(rep.gaps.empty());
    for (int k = 1; k <= 6; ++k) {
      const auto ref = cycle_band_oracle(6, k, 4000);
      CHECK(rep.bands[static_cast<std::size_t>(k - 1)].min == doctest::Approx(ref[0]).epsilon(1e-9));
      CHECK(rep.bands[static_cast<std::size_t>(k - 1)].max == doctest::Approx(ref[1]).epsilon(1e-9));
    }
  }
  SUBCASE("tree bands are points") {
    Rng rng(2);
    const Graph g = fixtures::path(5);
    const BaseMatrix h(g, inst::random_supported(rng, g));
    const auto rep = band_edges(h, BandMode::Atlas);
    const auto ref = fd::spectrum(h, {}, {});
    for (int k = 1; k <= 5; ++k) {
      const Band& b = rep.bands[static_cast<std::size_t>(k - 1)];
      CHECK(b.min == doctest::Approx(ref[k - 1]));
      CHECK(b.max == doctest::Approx(ref[k - 1]));
      CHECK(b.at_min.source == "signing");
    }
    CHECK(rep.gaps.size() == 4);
  }
  SUBCASE("seven-vertex second band") {
    const BaseMatrix h = fixtures::seven_vertex_matrix();
    const auto atlas = band_edges(h, BandMode::Atlas, 32, 16);
    const auto grid = band_edges(h, BandMode::Grid, 24, 16);
    const Band& a = atlas.bands[1];
    const Band& gb = grid.bands[1];
    CHECK(a.min <= gb.min + 1e-12);
    CHECK(a.min == doctest::Approx(gb.min));
    CHECK(a.at_min.extremum == Extremum::Min);
    CHECK(fd::lambda(h, a.at_min.point, 2) == doctest::Approx(a.min));
  }
}
