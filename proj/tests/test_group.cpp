// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "carnot/error.hpp"
#include "carnot/group.hpp"
#include "carnot/random.hpp"
#include "oracles.hpp"

using namespace carnot;

namespace {

Point random_point(Rng& rng, std::size_t n, double scale = 2.0) {
  Point p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = rng.uniform(-scale, scale);
  return p;
}

double max_diff(const Point& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("heisenberg model bookkeeping") {
  const GroupModel h = GroupModel::heisenberg(1);
  CHECK(h.dimension() == 3);
  CHECK(h.homogeneous_dimension() == 4);
  CHECK(h.step() == 2);
  CHECK(h.horizontal_dim() == 2);
  CHECK(h.weight(2) == 2);
  CHECK(h.bracket(0, 1, 0) == 1.0);
  CHECK(h.bracket(1, 0, 0) == -1.0);
  const GroupModel h2 = GroupModel::heisenberg(2);
  CHECK(h2.dimension() == 5);
  CHECK(h2.homogeneous_dimension() == 6);
  CHECK(GroupModel::abelian(2).homogeneous_dimension() == 2);
}

TEST_CASE("product matches the closed BCH formula") {
  const GroupModel h = GroupModel::heisenberg(1);
  const Point r = multiply(h, Point{1, 0, 0}, Point{0, 1, 0});
  CHECK(max_diff(r, oracle::heisenberg_product({1, 0, 0}, {0, 1, 0})) == 0.0);
  CHECK(r == Point{1, 1, 0.5});
  CHECK(multiply(h, Point{0, 0, 0}, Point{0.3, -2, 5}) == Point{0.3, -2, 5});

  Rng rng(11);
  for (int n : {1, 2, 3}) {
    const GroupModel g = GroupModel::heisenberg(n);
    for (int k = 0; k < 200; ++k) {
      const Point p = random_point(rng, g.dimension());
      const Point q = random_point(rng, g.dimension());
      CHECK(max_diff(multiply(g, p, q), oracle::heisenberg_product(p.vector(), q.vector())) <= 1e-14);
    }
  }
}

TEST_CASE("inverse and dilation") {
  const GroupModel h = GroupModel::heisenberg(1);
  CHECK(inverse(h, Point{1, 1, 0.5}) == Point{-1, -1, -0.5});
  CHECK(inverse(h, Point{0, 0, 0}) == Point{0, 0, 0});
  CHECK(dilate(h, 2.0, Point{1, 1, 1}) == Point{2, 2, 4});
  CHECK_THROWS_AS(dilate(h, 0.0, Point{1, 1, 1}), DomainError);
  CHECK_THROWS_AS(dilate(h, -1.0, Point{1, 1, 1}), DomainError);

  Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const Point p = random_point(rng, 3);
    const Point e = multiply(h, inverse(h, p), p);
    for (double v : e.vector()) CHECK(std::abs(v) <= 1e-15);
    const double r = std::exp(rng.uniform(-2.0, 2.0));
    const Point back = dilate(h, 1.0 / r, dilate(h, r, p));
    CHECK(max_diff(back, p.vector()) <= 1e-13);
  }
}

TEST_CASE("split into horizontal line and vertical subgroup") {
  const GroupModel h = GroupModel::heisenberg(1);
  const Direction e1{1, 0};
  Splitting s = split(h, e1, Point{1, 0, 0});
  CHECK(s.t == 1.0);
  CHECK(s.n == Point{0, 0, 0});

  // Frozen from the oracle: (1 e1)^{-1} (1,1,0) = (-1,0,0)(1,1,0) = (0, 1, -1/2).
  const std::vector<double> expected = oracle::heisenberg_product({-1, 0, 0}, {1, 1, 0});
  CHECK(expected == std::vector<double>{0, 1, -0.5});
  s = split(h, e1, Point{1, 1, 0});
  CHECK(s.t == doctest::Approx(1.0));
  CHECK(max_diff(s.n, expected) <= 1e-15);

  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const Point p = random_point(rng, 3);
    const double a = rng.uniform(0.0, 6.283185307179586);
    const Direction nu{std::cos(a), std::sin(a)};
    const Splitting sp = split(h, nu, p);
    CHECK(max_diff(multiply(h, horizontal_point(h, nu, sp.t), sp.n), p.vector()) <= 1e-12);
    CHECK(std::abs(sp.n[0] * nu[0] + sp.n[1] * nu[1]) <= 1e-12);
  }
}

TEST_CASE("model definition validation") {
  CHECK_THROWS_AS(GroupModel({0}, {}), ModelDefinitionError);
  CHECK_THROWS_AS(GroupModel({2, 1}, {}), ModelDefinitionError);
  CHECK_THROWS_AS(GroupModel({2, 1}, {{1, 1, 3, 1.0}}), ModelDefinitionError);
  CHECK_THROWS_AS(GroupModel({2, 1}, {{1, 2, 2, 1.0}}), ModelDefinitionError);
  CHECK_THROWS_AS(GroupModel({2, 1}, {{1, 2, 3, 1.0}, {2, 1, 3, 1.0}}), ModelDefinitionError);
  CHECK_NOTHROW(GroupModel({2, 1}, {{1, 2, 3, 1.0}, {2, 1, 3, -1.0}}));

  const GroupModel parsed = GroupModel::parse("# heisenberg\nlayers = 2 1\nbracket = 1 2 3 1\n");
  CHECK(parsed.dimension() == 3);
  CHECK(multiply(parsed, Point{1, 0, 0}, Point{0, 1, 0}) == Point{1, 1, 0.5});
  CHECK_THROWS(GroupModel::parse("layers = 2 1\ncolour = red\n"));
  CHECK_THROWS(GroupModel::from_spec("heisenberg:0"));
  CHECK(GroupModel::from_spec("heisenberg:2").name() == "heisenberg:2");

  const GroupModel step3({2, 1, 1}, {});
  CHECK(step3.homogeneous_dimension() == 7);
  CHECK_THROWS_AS(step3.check_exact(), UnsupportedModelError);
  CHECK_THROWS_AS(multiply(GroupModel::heisenberg(1), Point{1, 0}, Point{0, 1, 0}), ConformanceError);
}
