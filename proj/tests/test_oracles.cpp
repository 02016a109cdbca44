#include <numbers>

#include "doctest.h"
#include "magtorus/atlas.hpp"
#include "magtorus/error.hpp"
#include "magtorus/oracles.hpp"
#include "support/fixtures.hpp"
#include "support/instances.hpp"

using namespace magtorus;

namespace {

constexpr double kPi = std::numbers::pi;

MagneticPoint seven_point(double a1, double a2, double a3) {
  const Graph g = fixtures::seven_vertex_graph();
  MagneticPoint p;
  p.free_edges = {g.edge_index(1, 3), g.edge_index(2, 3), g.edge_index(5, 6)};
  p.angles = {wrap_angle(a1), wrap_angle(a2), wrap_angle(a3)};
  return p;
}

BaseMatrix random_instance(Rng& rng, const Graph& g) { return BaseMatrix(g, inst::random_supported(rng, g)); }

}  // namespace

TEST_CASE("finite-difference gradient") {
  Rng rng(1);
  SUBCASE("vanishes at signings") {
    const BaseMatrix h = random_instance(rng, fixtures::k4());
    for (const auto& s : enumerate_signings(h))
      for (int k = 1; k <= 4; ++k)
        for (double x : fd_gradient(h, s.point(), k)) CHECK(std::abs(x) <= 1e-7);
  }
  SUBCASE("matches the analytic gradient") {
    int compared = 0;
    for (int t = 0; t < 100; ++t) {
      const BaseMatrix h = random_instance(rng, inst::random_connected_graph(rng, 6, 3));
      MagneticPoint p = zero_point(whole_graph_partition(h.graph()).free_edges());
      for (double& a : p.angles) a = rng.angle();
      const int k = 1 + static_cast<int>(rng.index(6));
      const EigenSystem es = eig_herm(assemble(h, p));
      if (std::min(es.gap_below[k - 1], es.gap_above[k - 1]) < 1e-3) continue;
      const auto fd = fd_gradient(h, p, k);
      const auto rich = fd_gradient(h, p, k, {1e-4, true});
      const auto exact = gradient(h, p, k);
      for (std::size_t i = 0; i < exact.size(); ++i) {
        CHECK(std::abs(fd[i] - exact[i]) <= 1e-6 * std::max(1.0, std::abs(exact[i])));
        CHECK(std::abs(rich[i] - exact[i]) <= 1e-6 * std::max(1.0, std::abs(exact[i])));
      }
      ++compared;
    }
    CHECK(compared > 80);
  }
}

TEST_CASE("finite-difference Hessian") {
  const BaseMatrix h = fixtures::seven_vertex_matrix();
  const Inertia at_zero = fd_inertia(fd_hessian(h, seven_point(2 * kPi / 3, -2 * kPi / 3, 0.0), 2));
  CHECK(at_zero.minus == 2);
  CHECK(at_zero.zero == 1);
  const Inertia at_pi = fd_inertia(fd_hessian(h, seven_point(2 * kPi / 3, -2 * kPi / 3, kPi), 2));
  CHECK(at_pi.minus == 0);
  CHECK(at_pi.zero == 1);
  const RMatrix rich = fd_hessian(h, seven_point(2 * kPi / 3, -2 * kPi / 3, 0.0), 2, {1e-3, true});
  CHECK(fd_inertia(rich).minus == 2);

  SUBCASE("gap collapse") {
    const BaseMatrix fan = fixtures::fan_matrix(3.0);
    const Graph& g = fan.graph();
    OneForm a;
    a.values.assign(static_cast<std::size_t>(g.edge_count()), 0.0);
    a.values[static_cast<std::size_t>(g.edge_index(0, 4))] = 2 * kPi / 3;
    a.values[static_cast<std::size_t>(g.edge_index(1, 4))] = kPi;
    a.values[static_cast<std::size_t>(g.edge_index(2, 4))] = -2 * kPi / 3;
    const MagneticPoint p = gauge_reduce(g, a, whole_graph_partition(g));
    CHECK_THROWS_AS(fd_hessian(fan, p, 1), Error);
    CHECK_THROWS_AS(fd_gradient(fan, p, 2), Error);
  }
}

TEST_CASE("grid search") {
  Rng rng(3);
  SUBCASE("disjoint cycles: only signings") {
    const BaseMatrix h = random_instance(rng, fixtures::chain_of_triangles());
    for (int k = 1; k <= 9; ++k) {
      const auto res = grid_search_critical(h, k, {.resolution = 6});
      int signings = 0;
      for (const auto& c : res.candidates) {
        CHECK(c.kind != CandidateKind::Unmatched);
        CHECK(c.kind != CandidateKind::Manifold);
        if (c.kind == CandidateKind::Signing) {
          ++signings;
          CHECK(c.gradient_norm <= 1e-8);
        }
      }
      CHECK(signings == 8);
    }
  }
  SUBCASE("seven-vertex circles") {
    const BaseMatrix h = fixtures::seven_vertex_matrix();
    const auto res = grid_search_critical(h, 2, {.resolution = 9});
    int on_circles = 0;
    for (const auto& c : res.candidates) {
      CHECK(c.kind != CandidateKind::Unmatched);
      if (c.kind != CandidateKind::Manifold) continue;
      const double a1 = centered_angle(c.point.angles[0]);
      const double a2 = centered_angle(c.point.angles[1]);
      if (std::abs(std::abs(a1) - 2 * kPi / 3) < 1e-6 && std::abs(a1 + a2) < 1e-6) ++on_circles;
    }
    CHECK(on_circles > 0);
  }
  SUBCASE("resolution doubling keeps classifications") {
    const BaseMatrix h = random_instance(rng, fixtures::k4());
    for (int k = 1; k <= 4; ++k) {
      const auto coarse = grid_search_critical(h, k, {.resolution = 6});
      const auto fine = grid_search_critical(h, k, {.resolution = 12});
      for (const auto& c : coarse.candidates)
        for (const auto& f : fine.candidates)
          if (torus_distance(c.point, f.point) < 1e-6) CHECK(c.kind == f.kind);
      auto count = [](const GridSearchResult& r, CandidateKind kind) {
        return std::ranges::count_if(r.candidates, [&](const Candidate& c) { return c.kind == kind; });
      };
      CHECK(count(coarse, CandidateKind::Signing) == count(fine, CandidateKind::Signing));
      CHECK(count(fine, CandidateKind::Unmatched) == 0);
    }
  }
  SUBCASE("threads do not change the result") {
    const BaseMatrix h = random_instance(rng, fixtures::k4());
    const auto one = grid_search_critical(h, 2, {.resolution = 8, .threads = 1});
    const auto many = grid_search_critical(h, 2, {.resolution = 8, .threads = 3});
    REQUIRE(one.candidates.size() == many.candidates.size());
    for (std::size_t i = 0; i < one.candidates.size(); ++i)
      CHECK(one.candidates[i].point.angles == many.candidates[i].point.angles);
  }
  CHECK_THROWS_AS(grid_search_critical(random_instance(rng, inst::random_connected_graph(rng, 8, 6)), 1), Error);
}

TEST_CASE("exhaustive signing check") {
  Rng rng(5);
  SUBCASE("single cycle") {
    const auto rep = exhaustive_small_verify(random_instance(rng, fixtures::cycle(5)));
    CHECK(rep.passed());
    CHECK(rep.skipped == 0);
    for (const auto& row : rep.histogram) CHECK(row == std::vector<std::uint64_t>{1, 1});
  }
  SUBCASE("tree") {
    const auto rep = exhaustive_small_verify(random_instance(rng, fixtures::path(6)));
    CHECK(rep.passed());
    for (const auto& row : rep.histogram) CHECK(row == std::vector<std::uint64_t>{1});
  }
  SUBCASE("figure eight") {
    const auto rep = exhaustive_small_verify(random_instance(rng, fixtures::figure_eight()));
    CHECK(rep.passed());
    CHECK(rep.skipped == 0);
    for (const auto& row : rep.histogram) CHECK(row == std::vector<std::uint64_t>{1, 2, 1});
  }
  SUBCASE("random graphs") {
    for (int t = 0; t < 10; ++t) {
      const auto rep = exhaustive_small_verify(random_instance(rng, inst::random_connected_graph(rng, 7, 1 + static_cast<int>(rng.index(3)))));
      CHECK(rep.passed());
      CHECK(rep.checked > 0);
    }
  }
  CHECK_THROWS_AS(exhaustive_small_verify(random_instance(rng, inst::random_connected_graph(rng, 9, 1))), Error);
}
