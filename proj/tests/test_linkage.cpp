#include <numbers>

#include "doctest.h"
#include "magtorus/error.hpp"
#include "magtorus/linkage.hpp"
#include "magtorus/random.hpp"

using namespace magtorus;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("genericity") {
  CHECK_FALSE(is_generic({{1, 1}}));
  CHECK(is_generic({{1, 1, 1}}));
  CHECK_FALSE(is_generic({{1, 2, 3}}));
  CHECK(is_generic({{1, 1, 1, 2}}));  // every signed sum is odd
  CHECK(is_generic({{1.1, 1.3, 1.7, 2.9}}));
  CHECK_THROWS_AS(is_generic({{1, -1}}), Error);
}

TEST_CASE("classification") {
  const auto c = classify({{1, 1, 1}});
  CHECK(c.nonempty);
  CHECK(c.dim == 0);
  CHECK(c.components == 2);
  CHECK_FALSE(classify({{3, 1, 1}}).nonempty);
  CHECK_FALSE(classify({{1, 2.5}}).nonempty);
  CHECK_THROWS_AS(classify({{1, 2, 3}}), Error);
  const auto four = classify({{1.1, 1.3, 1.7, 2.9}});
  CHECK(four.nonempty);
  CHECK(four.dim == 1);
  // M2 + M3 = 3.0 vs half sum 3.5
  CHECK(four.components == 1);
  const auto two = classify({{2.0, 2.1, 2.2, 1.0}});
  CHECK(two.components == 2);
}

TEST_CASE("triangle solutions") {
  SUBCASE("equilateral") {
    const auto pts = solve_triangle(1, 1, 1);
    CHECK(pts[0].thetas[0] == doctest::Approx(kPi / 3));
    CHECK(pts[0].thetas[1] == doctest::Approx(2 * kPi - kPi / 3));
    CHECK(pts[0].thetas[2] == doctest::Approx(kPi));
    for (const auto& p : pts) CHECK(std::abs(p.residual) < 1e-12);
    CHECK(pts[0].component == -pts[1].component);
    // The two solutions are conjugate.
    CHECK(wrap_angle(pts[0].thetas[0] + pts[1].thetas[0]) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("3-4-5") {
    const auto pts = solve_triangle(3, 4, 5);
    CHECK(std::abs(pts[0].residual) <= 1e-12);
    // Angle between the sides of length 3 and 4 is a right angle.
    CHECK(std::abs(std::cos(pts[0].thetas[0] - pts[0].thetas[1])) < 1e-12);
    CHECK(std::cos(pts[0].thetas[0]) == doctest::Approx(3.0 / 5.0));
  }
  SUBCASE("approaching the collinear limit") {
    double prev = 1.0;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const auto pts = solve_triangle(1, 1, 2 - eps);
      const double spread = std::abs(centered_angle(pts[0].thetas[0]));
      CHECK(spread < prev);
      prev = spread;
    }
    CHECK(prev < 0.02);
  }
  CHECK_THROWS_AS(solve_triangle(1, 2, 3), Error);
}

TEST_CASE("sampling") {
  SUBCASE("three links give the two triangle points") {
    const auto pts = sample_points({{1, 1, 1}}, 10, 1);
    CHECK(pts.size() == 2);
  }
  SUBCASE("one component for (1,1,1,2)") {
    const LinkageSpec spec{{1, 1, 1, 2}};
    const auto cls = classify(spec);
    CHECK(cls.dim == 1);
    CHECK(cls.components == 1);
    const auto pts = sample_points(spec, 50, 7);
    CHECK(pts.size() == 50);
    for (const auto& p : pts) {
      CHECK(std::abs(p.residual) <= 1e-9 * total_length(spec));
      CHECK(p.component == 0);
      CHECK(p.thetas.back() == doctest::Approx(kPi));
    }
  }
  SUBCASE("two components are both populated and swapped by conjugation") {
    const LinkageSpec spec{{2.0, 2.1, 2.2, 1.0, 0.3}};
    REQUIRE(classify(spec).components == 2);
    const auto pts = sample_points(spec, 20, 3);
    int plus = 0, minus = 0;
    for (const auto& p : pts) {
      (p.component > 0 ? plus : minus)++;
      std::vector<double> conj = p.thetas;
      for (std::size_t j = 0; j + 1 < conj.size(); ++j) conj[j] = wrap_angle(-conj[j]);
      CHECK(component_label(spec, conj) == -p.component);
      CHECK(std::abs(linkage_residual(spec.b, conj)) < 1e-9 * total_length(spec));
    }
    CHECK(plus == 20);
    CHECK(minus == 20);
  }
  SUBCASE("jacobian has rank two at sampled points") {
    const LinkageSpec spec{{1.21, 0.83, 1.57, 1.09, 0.94, 1.33}};
    for (const auto& p : sample_points(spec, 30, 11)) {
      const auto svd = svd_real(linkage_jacobian(spec.b, p.thetas));
      CHECK(svd.values[1] > 1e-8 * total_length(spec));
    }
  }
  SUBCASE("empty space is an error") {
    CHECK_THROWS_AS(sample_points({{5, 1, 1, 1}}, 3, 1), Error);
  }
  SUBCASE("same seed, same points") {
    const LinkageSpec spec{{1.23, 0.81, 1.52, 1.07}};
    const auto a = sample_points(spec, 5, 42);
    const auto b = sample_points(spec, 5, 42);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].thetas == b[i].thetas);
  }
}
