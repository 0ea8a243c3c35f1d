// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "carnot/beta.hpp"
#include "carnot/error.hpp"
#include "carnot/slice.hpp"
#include "oracles.hpp"

using namespace carnot;

namespace {
const GroupModel kH1 = GroupModel::heisenberg(1);

Direction e1_direction(std::size_t m) {
  std::vector<double> v(m, 0.0);
  v[0] = 1.0;
  return Direction(v);
}

bool within(const Estimate& e, double target, double k = 4.0) {
  return std::abs(e.value - target) <= k * e.std_error + 1e-12;
}
}  // namespace

TEST_CASE("quadrature oracle") {
  CHECK(oracle::quartic_slice_area_simpson(20000) == doctest::Approx(oracle::kQuarticSliceArea).epsilon(1e-10));
}

TEST_CASE("central slice areas against closed forms") {
  const Direction e1{1, 0};
  const Estimate k = slice_area(Gauge::koranyi(kH1), e1, 0.0, 400000, 7);
  CHECK(k.n_samples == 400000);
  CHECK(k.seed == 7);
  CHECK(within(k, oracle::kQuarticSliceArea));

  // Rectangle {|s| <= 1, |u| <= 1/eps2^2}.
  for (double eps2 : {1.0, 2.0}) {
    const Estimate d = slice_area(Gauge::d_infty(kH1, {1.0, eps2}), e1, 0.0, 200000, 7);
    CHECK(d.value == doctest::Approx(4.0 / (eps2 * eps2)).epsilon(0.02));
  }
  const Estimate b = slice_area(Gauge::star_ball(kH1, 0.5), e1, 0.0, 200000, 7);
  CHECK(within(b, std::numbers::pi * 0.25));
}

TEST_CASE("off-center slices") {
  const Gauge k = Gauge::koranyi(kH1);
  const Direction nu{0.6, 0.8};
  CHECK(slice_area(k, nu, 1.2, 10000, 7).value == 0.0);
  CHECK(slice_area(k, nu, -1.0001, 10000, 7).value == 0.0);
  const Estimate a = slice_area(k, nu, 0.5, 200000, 1);
  const Estimate b = slice_area(k, nu, -0.5, 200000, 2);
  CHECK(std::abs(a.value - b.value) <= 3.0 * joint_stderr(a, b));

  // In R^2 the slice of the unit disc at t is a chord of length 2 sqrt(1 - t^2).
  const Gauge disc = Gauge::star_ball(GroupModel::abelian(2), 1.0);
  for (double t : {0.0, 0.3, 0.8}) {
    const Estimate c = slice_area(disc, e1_direction(2), t, 20000, 3);
    CHECK(c.value == doctest::Approx(2.0 * std::sqrt(1.0 - t * t)).epsilon(1e-6));
  }
}

TEST_CASE("translated slice equals psi(t) at z = t nu") {
  const Gauge k = Gauge::koranyi(kH1);
  const Direction nu{1, 0};
  const Estimate a = translated_slice_area(k, nu, horizontal_point(kH1, nu, 0.4), 200000, 5);
  const Estimate b = slice_area(k, nu, 0.4, 200000, 6);
  CHECK(std::abs(a.value - b.value) <= 3.0 * joint_stderr(a, b));
}

TEST_CASE("support and profile") {
  const Gauge k = Gauge::koranyi(kH1);
  CHECK(slice_support(k, Direction{1, 0}, 7) == doctest::Approx(1.0).epsilon(1e-9));
  const SliceProfile p = slice_profile(k, Direction{1, 0}, 41, 50000, 7);
  REQUIRE(p.grid.size() == 41);
  CHECK(p.grid[p.center_index()] == 0.0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < p.areas.size(); ++i)
    if (p.areas[i].value > p.areas[best].value) best = i;
  CHECK(std::abs(p.grid[best]) <= 0.1);
  CHECK_THROWS_AS(slice_profile(k, Direction{1, 0}, 40, 1000, 7), DomainError);
  CHECK(busemann_exponent(kH1) == 0.5);
}

TEST_CASE("concavity report") {
  const Gauge k = Gauge::koranyi(kH1);
  const ConcavityReport ok = concavity_report(slice_profile(k, Direction{1, 0}, 41, 100000, 7), 0.5);
  CHECK(ok.violations == 0);
  CHECK(ok.triples == 39);

  const Gauge disc = Gauge::star_ball(GroupModel::abelian(2), 1.0);
  CHECK(concavity_report(slice_profile(disc, e1_direction(2), 41, 20000, 7), 1.0).violations == 0);

  const Gauge two = Gauge::two_ball(kH1, 0.5, 0.3);
  CHECK(concavity_report(slice_profile(two, Direction{1, 0}, 41, 100000, 7), 0.5).violations >= 1);
}
