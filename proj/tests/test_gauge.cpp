// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "carnot/error.hpp"
#include "carnot/gauge.hpp"
#include "oracles.hpp"

using namespace carnot;

namespace {
const GroupModel kH1 = GroupModel::heisenberg(1);

Point random_point(Rng& rng, double scale = 2.0) {
  return Point{rng.uniform(-scale, scale), rng.uniform(-scale, scale), rng.uniform(-scale, scale)};
}
}  // namespace

TEST_CASE("koranyi closed form") {
  const Gauge k = Gauge::koranyi(kH1);
  CHECK(k.norm(Point{1, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(k.norm(Point{0, 0, 1}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(k.norm(Point{0, 0, 0}) == 0.0);
  CHECK(distance(k, Point{0, 0, 0}, Point{1, 0, 0}) == doctest::Approx(1.0));
  CHECK(k.r0() == 1.0);

  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const Point p = random_point(rng);
    CHECK(k.norm(p) == doctest::Approx(oracle::koranyi(p.vector())).epsilon(1e-14));
    CHECK(k.in_unit_ball(p.coords()) == (oracle::koranyi(p.vector()) <= 1.0));
  }
}

TEST_CASE("distance is left invariant and homogeneous") {
  const Gauge k = Gauge::koranyi(kH1);
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const Point p = random_point(rng), q = random_point(rng), z = random_point(rng);
    const double r = std::exp(rng.uniform(-2.0, 2.0));
    const double d = distance(k, p, q);
    CHECK(distance(k, p, p) == 0.0);
    CHECK(distance(k, multiply(kH1, z, p), multiply(kH1, z, q)) == doctest::Approx(d).epsilon(1e-12));
    CHECK(distance(k, dilate(kH1, r, p), dilate(kH1, r, q)) == doctest::Approx(r * d).epsilon(1e-12));
  }
}

TEST_CASE("d_infty closed form") {
  const Gauge d = Gauge::d_infty(kH1, {1.0, 2.0});
  Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    const Point p = random_point(rng);
    CHECK(d.norm(p) == doctest::Approx(oracle::dinf(p.vector(), 2.0)).epsilon(1e-14));
  }
  CHECK(d.layer_bounds()[1] == doctest::Approx(0.25));
  CHECK_THROWS(Gauge::d_infty(kH1, {2.0, 2.0}));
}

TEST_CASE("star body gauge by bisection") {
  const Gauge b = Gauge::star_ball(kH1, 0.5);
  CHECK(b.norm(Point{0.5, 0, 0}) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(b.norm(Point{0, 0, 0.5}) == doctest::Approx(1.0).epsilon(1e-9));
  // |delta_{1/r}(1,0,0)| = 1/r = 1/2 gives r = 2; the oracle confirms it.
  CHECK(oracle::starball_norm({1, 0, 0}, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.norm(Point{1, 0, 0}) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(b.norm(Point{0, 0, 0}) == 0.0);
  CHECK(b.r0() == doctest::Approx(0.5).epsilon(1e-9));

  Rng rng(6);
  for (int i = 0; i < 300; ++i) {
    const Point p = random_point(rng);
    CHECK(b.norm(p) == doctest::Approx(oracle::starball_norm(p.vector(), 0.5)).epsilon(1e-9));
  }

  // The Korányi body through the generic route agrees with the closed form.
  StarBody body{[](std::span<const double> p) {
                  const double h = p[0] * p[0] + p[1] * p[1];
                  return h * h + 16.0 * p[2] * p[2] <= 1.0;
                },
                {1.0, 0.25},
                1e-12};
  const Gauge generic = Gauge::star_body(kH1, body, {true, true}, "koranyi-body");
  const Gauge k = Gauge::koranyi(kH1);
  for (int i = 0; i < 300; ++i) {
    const Point p = random_point(rng);
    CHECK(generic.norm(p) == doctest::Approx(k.norm(p)).epsilon(1e-10));
  }
}

TEST_CASE("gauge specs") {
  CHECK(Gauge::from_spec(kH1, "koranyi").kind() == GaugeKind::koranyi);
  CHECK(Gauge::from_spec(kH1, "dinf:eps2=0.5").eps()[1] == 0.5);
  CHECK(Gauge::from_spec(kH1, "starball:rho=0.5").kind() == GaugeKind::star_body);
  CHECK_FALSE(Gauge::from_spec(kH1, "twoball:r=0.5,c=0.3").flags().declared_convex);
  CHECK(Gauge::from_spec(kH1, "aniso").flags().declared_convex);
  CHECK_THROWS_AS(Gauge::from_spec(kH1, "euclid"), ParseError);
  CHECK_THROWS_AS(Gauge::from_spec(kH1, "starball:radius=2"), ParseError);
  CHECK_THROWS_AS(Gauge::from_spec(kH1, "starball"), ParseError);
}

TEST_CASE("validation and calibration") {
  const ValidationReport k = validate(Gauge::koranyi(kH1), 100000, 7);
  CHECK(k.passed());
  CHECK(k.violations("triangle") == 0);
  CHECK(k.worst_violation <= 1e-12);

  const ValidationReport bad = validate(Gauge::d_infty(kH1, {1.0, 1000.0}), 20000, 7);
  CHECK_FALSE(bad.passed());
  CHECK(bad.violations("triangle") > 0);
  CHECK(bad.witness.has_value());
  CHECK(bad.violations("symmetry") == 0);

  const CalibrationResult cal = calibrate_dinfty(kH1, {4, 2, 1, 0.5, 0.25}, 100000, 7);
  CHECK(cal.eps2 == 2.0);
  CHECK(cal.certification == "sample-certified");
  bool seen_pass = false;
  for (const auto& c : cal.candidates) {
    if (seen_pass) CHECK(c.passed);
    seen_pass = seen_pass || c.passed;
  }
  CHECK_THROWS_AS(calibrate_dinfty(kH1, {1000}, 20000, 7), CalibrationError);
}

TEST_CASE("midpoint convexity") {
  CHECK(midpoint_convexity(Gauge::koranyi(kH1), 20000, 7).violations == 0);
  CHECK(midpoint_convexity(Gauge::d_infty(kH1, {1.0, 2.0}), 20000, 7).violations == 0);
  CHECK(midpoint_convexity(Gauge::star_ball(kH1, 0.5), 20000, 7).violations == 0);
  const ConvexityResult two = midpoint_convexity(Gauge::two_ball(kH1, 0.5, 0.3), 20000, 7);
  CHECK(two.violations > 0);
  CHECK(two.witness.has_value());
}
