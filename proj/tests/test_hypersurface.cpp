// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "carnot/error.hpp"
#include "carnot/expression.hpp"
#include "carnot/hypersurface.hpp"
#include "carnot/slice.hpp"
#include "oracles.hpp"

using namespace carnot;

namespace {
const GroupModel kH1 = GroupModel::heisenberg(1);

double dist_sign_free(const Direction& a, std::vector<double> b) {
  const double d1 = std::hypot(a[0] - b[0], a[1] - b[1]);
  const double d2 = std::hypot(a[0] + b[0], a[1] + b[1]);
  return std::min(d1, d2);
}
}  // namespace

TEST_CASE("expression parser") {
  const Expression e = Expression::parse("x1^2 + 2*x2 - sin(pi*x3)/4", 3);
  const std::vector<double> p{1.5, -0.5, 0.5};
  CHECK(e.evaluate(p) == doctest::Approx(2.25 - 1.0 - 0.25));
  CHECK(Expression::parse("-x1^2", 1).evaluate(std::vector<double>{3.0}) == doctest::Approx(-9.0));
  CHECK(Expression::parse("exp(log(2)) + sqrt(abs(-9)) + cos(0)", 1).evaluate(std::vector<double>{0.0}) ==
        doctest::Approx(6.0));
  CHECK_THROWS_AS(Expression::parse("x4", 3), ParseError);
  CHECK_THROWS_AS(Expression::parse("x1 +", 3), ParseError);
  CHECK_THROWS_AS(Expression::parse("foo(x1)", 3), ParseError);
  CHECK_THROWS_AS(Expression::parse("(x1", 3), ParseError);
}

TEST_CASE("horizontal normals") {
  const SurfaceSpec v = vertical_plane(kH1, Direction{1, 0}, Point{0, 0, 0});
  CHECK(v.base_normal()[0] == doctest::Approx(1.0));
  CHECK(horizontal_normal(v, Point{0, 3, -2})[0] == doctest::Approx(1.0));

  // f = t: grad_H f = (-y/2, x/2), which is (0, 1/2) at (1,0,0).
  const SurfaceSpec t = coordinate_plane(kH1, Point{1, 0, 0});
  CHECK(t.base_normal()[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(t.base_normal()[1] == doctest::Approx(1.0));
  CHECK(t.horizontal_gradient(Point{1, 0, 0})[1] == doctest::Approx(0.5));
  const SurfaceSpec t2 = coordinate_plane(kH1, Point{0, 1, 0});
  CHECK(dist_sign_free(t2.base_normal(), {1, 0}) <= 1e-12);

  // Finite differences along group lines reproduce the analytic gradient.
  const SurfaceSpec fd = expression_surface(kH1, "x3", Point{1, 0, 0});
  CHECK_FALSE(fd.analytic_gradient());
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Point p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const auto a = t.horizontal_gradient(p);
    const auto b = fd.horizontal_gradient(p);
    CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-8).scale(1.0));
    CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-8).scale(1.0));
  }

  CHECK_THROWS_AS(coordinate_plane(kH1, Point{0, 0, 0}), RegularityError);
  CHECK_THROWS_AS(expression_surface(kH1, "x1 - 1", Point{0, 0, 0}), DomainError);
  CHECK(surface_from_spec(kH1, "vplane:nu=0,1", Point{0, 0, 0}).base_normal()[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(surface_from_spec(kH1, "sphere", Point{0, 0, 0}), ParseError);
}

TEST_CASE("graph height against a scan oracle") {
  const SurfaceSpec v = vertical_plane(kH1, Direction{1, 0}, Point{0, 0, 0});
  CHECK(graph_height(v, Point{0, 0.7, -0.2}, 1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(graph_height(v, Point{0, 0, 0}, 1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

  const Point x{1, 0, 0};
  const SurfaceSpec s = expression_surface(kH1, "x3 + 0.3*x1^2 - 0.3", x);
  const auto& X1 = s.frame()[0];
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    // n in N: horizontal part orthogonal to X1.
    const double c = rng.uniform(-0.3, 0.3);
    const Point n{c * -X1[1], c * X1[0], rng.uniform(-0.05, 0.05)};
    const std::vector<double> xn = oracle::heisenberg_product(x.vector(), n.vector());
    auto g = [&](double sigma) {
      const std::vector<double> q = oracle::heisenberg_product(xn, {sigma * X1[0], sigma * X1[1], 0.0});
      return q[2] + 0.3 * q[0] * q[0] - 0.3;
    };
    const double expected = oracle::scan_root(g, 0.8, 4000);
    REQUIRE_FALSE(std::isnan(expected));
    CHECK(graph_height(s, n, 0.8) == doctest::Approx(expected).epsilon(1e-10).scale(1.0));
  }
  CHECK_THROWS_AS(graph_height(v, Point{0.5, 0, 0}, 0.1), BracketError);
}

TEST_CASE("halfspace perimeter is the central slice") {
  const Gauge k = Gauge::koranyi(kH1);
  const SurfaceSpec v = vertical_plane(kH1, Direction{1, 0}, Point{0, 0, 0});
  const PerimeterEstimate p = perimeter_ball(v, k, Point{0, 0, 0}, 1.0, 200000, 7);
  CHECK(std::abs(p.value.value - oracle::kQuarticSliceArea) <= 4.0 * p.value.std_error);
  const PerimeterEstimate half = perimeter_ball(v, k, Point{0, 0, 0}, 0.5, 200000, 8);
  CHECK(std::abs(half.value.value / 0.125 - oracle::kQuarticSliceArea) <= 4.0 * half.value.std_error / 0.125);
}

TEST_CASE("tplane perimeter against the grid oracle") {
  const Gauge k = Gauge::koranyi(kH1);
  const SurfaceSpec s = coordinate_plane(kH1, Point{1, 0, 0});
  for (double t : {0.1, 0.4}) {
    const double expected = oracle::tplane_perimeter({1, 0, 0}, t, 1500);
    const PerimeterEstimate p = perimeter_ball(s, k, Point{1, 0, 0}, t, 400000, 11);
    CHECK(p.value.value > 0.0);
    CHECK(std::abs(p.value.value - expected) <= 4.0 * p.value.std_error + 2e-3 * expected);
  }
  // Off-center ball on the same oracle.
  const Point y{1.05, 0.02, 0.01};
  const double expected = oracle::tplane_perimeter(y.vector(), 0.1, 1500);
  const PerimeterEstimate p = perimeter_ball(s, k, y, 0.1, 400000, 12);
  CHECK(std::abs(p.value.value - expected) <= 4.0 * p.value.std_error + 2e-3 * expected);
}

TEST_CASE("frozen sampler is monotone in the radius") {
  const Gauge k = Gauge::koranyi(kH1);
  const SurfaceSpec s = coordinate_plane(kH1, Point{1, 0, 0});
  const PerimeterSampler sampler(s, k, 0.2, Point{1, 0, 0}, 0.4, 100000, 3);
  double prev = 0.0;
  for (double r : {0.05, 0.1, 0.2, 0.3, 0.4}) {
    const double v = sampler.evaluate(Point{1, 0, 0}, r).value;
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(sampler.stats().failures == 0);
  CHECK_THROWS_AS(sampler.evaluate(Point{1, 0, 0}, 0.5), DomainError);
}
