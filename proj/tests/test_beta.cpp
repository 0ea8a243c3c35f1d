// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "carnot/beta.hpp"
#include "carnot/error.hpp"
#include "oracles.hpp"

using namespace carnot;

namespace {
const GroupModel kH1 = GroupModel::heisenberg(1);
}

TEST_CASE("beta of the Korányi ball takes the convex fast path") {
  BetaOptions opts;
  opts.samples = 400000;
  const BetaResult r = beta(Gauge::koranyi(kH1), Direction{0.6, 0.8}, opts);
  CHECK(r.method == BetaMethod::convex_fast_path);
  CHECK(r.argmax_t == 0.0);
  CHECK(std::abs(r.value.value - oracle::kQuarticSliceArea) <= 4.0 * r.value.std_error);
  CHECK(r.constants.omega == r.value.value);
  CHECK(r.constants.c == doctest::Approx(r.value.value / 8.0));
  CHECK(to_string(r.method) == "convex_fast_path");
}

TEST_CASE("beta of d_infty and starball") {
  BetaOptions opts;
  opts.samples = 200000;
  const BetaResult d = beta(Gauge::d_infty(kH1, {1.0, 2.0}), Direction{1, 0}, opts);
  CHECK(d.value.value == doctest::Approx(1.0).epsilon(0.01));
  CHECK(d.constants.c == doctest::Approx(0.125).epsilon(0.01));
  const BetaResult b = beta(Gauge::star_ball(kH1, 0.5), Direction{1, 0}, opts);
  CHECK(std::abs(b.value.value - std::numbers::pi / 4.0) <= 4.0 * b.value.std_error);
}

TEST_CASE("grid path agrees with the fast path on a convex ball") {
  BetaOptions opts;
  opts.samples = 200000;
  opts.force_grid = true;
  const BetaResult g = beta(Gauge::koranyi(kH1), Direction{1, 0}, opts);
  CHECK(g.method == BetaMethod::grid_refine);
  CHECK(std::abs(g.argmax_t) <= 0.1);
  CHECK(g.profile.has_value());
  CHECK(std::abs(g.value.value - oracle::kQuarticSliceArea) <= 4.0 * g.value.std_error + 0.002);
}

TEST_CASE("non-convex body: maximum sits off center") {
  // Two balls of radius r offset by +-c along nu: psi(t) = pi (r^2 - (|t| - c)^2)
  // for |t| <= r + c, so beta = pi r^2 at |t| = c.
  BetaOptions opts;
  opts.samples = 200000;
  const BetaResult r = beta(Gauge::two_ball(kH1, 0.5, 0.3), Direction{1, 0}, opts);
  CHECK(r.method == BetaMethod::grid_refine);
  CHECK(std::abs(std::abs(r.argmax_t) - 0.3) <= 0.03);
  CHECK(r.value.value == doctest::Approx(std::numbers::pi * 0.25).epsilon(0.02));
}

TEST_CASE("refusal after failed validation") {
  BetaOptions opts;
  opts.samples = 10000;
  opts.validation_passed = false;
  CHECK_THROWS_AS(beta(Gauge::koranyi(kH1), Direction{1, 0}, opts), RefusalError);
  opts.override_validation = true;
  CHECK_NOTHROW(beta(Gauge::koranyi(kH1), Direction{1, 0}, opts));
}

TEST_CASE("constancy over directions") {
  BetaOptions opts;
  opts.samples = 100000;
  const ConstancyReport k = beta_constancy(Gauge::koranyi(kH1), 8, opts, 7);
  CHECK(k.results.size() == 8);
  CHECK(k.constant);

  // Abelian R^2 with the Euclidean disc: the longest chord is 2.
  const ConstancyReport e = beta_constancy(Gauge::star_ball(GroupModel::abelian(2), 1.0), 8, opts, 7);
  CHECK(e.constant);
  for (const auto& r : e.results) CHECK(r.value.value == doctest::Approx(2.0).epsilon(1e-6));

  // Directions are unit vectors and reproducible.
  const Direction a = random_direction(kH1, 7, 3), b = random_direction(kH1, 7, 3);
  CHECK(a[0] == b[0]);
  CHECK(std::hypot(a[0], a[1]) == doctest::Approx(1.0));
}
