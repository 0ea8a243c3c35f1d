// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

// Reference computations written independently of the library: they share
// no code with core/ and are used to freeze expected values.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

/// int_0^1 sqrt(1 - s^4) ds by adaptive Gauss-Kronrod quadrature
/// (scipy.integrate.quad, reported error 1.3e-15).
inline constexpr double kQuarticSliceArea = 0.8740191847640402;

/// Product on H^n in coordinates (x1, y1, ..., xn, yn, t) with
/// [X_i, Y_i] = T: the closed BCH formula p + q + [p, q] / 2.
inline std::vector<double> heisenberg_product(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i] + q[i];
  const std::size_t n = (p.size() - 1) / 2;
  double omega = 0.0;
  for (std::size_t i = 0; i < n; ++i) omega += p[2 * i] * q[2 * i + 1] - p[2 * i + 1] * q[2 * i];
  r.back() += 0.5 * omega;
  return r;
}

inline double koranyi(const std::vector<double>& p) {
  double h = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) h += p[i] * p[i];
  return std::pow(h * h + 16.0 * p.back() * p.back(), 0.25);
}

inline double dinf(const std::vector<double>& p, double eps2) {
  double h = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) h += p[i] * p[i];
  return std::max(std::sqrt(h), eps2 * std::sqrt(std::abs(p.back())));
}

/// Gauge of the Euclidean ball of radius rho on H^n: the r with
/// |delta_{1/r} p| = rho, by plain bisection on the decreasing map
/// r -> |delta_{1/r} p|.
inline double starball_norm(const std::vector<double>& p, double rho) {
  auto size = [&](double r) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) s += (p[i] / r) * (p[i] / r);
    s += (p.back() / (r * r)) * (p.back() / (r * r));
    return std::sqrt(s);
  };
  double lo = 1e-12, hi = 1.0;
  while (size(hi) > rho) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (size(mid) > rho ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Composite Simpson rule on [a, b] with `n` (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// int_0^1 sqrt(1 - s^4) ds after s = 1 - w^2, which removes the square-root
/// singularity at s = 1.
inline double quartic_slice_area_simpson(int n) {
  return simpson(
      [](double w) {
        const double s = 1.0 - w * w;
        return std::sqrt(std::max(0.0, 1.0 - s * s * s * s)) * 2.0 * w;
      },
      0.0, 1.0, n);
}

/// Perimeter measure of {t < 0} in H^1 on the Korányi ball B(y, r): the
/// surface is the plane t = 0 with density |grad_H f| / |grad f| =
/// sqrt(x^2 + y^2) / 2 against Lebesgue area. Midpoint rule on a grid over
/// the horizontal bounding square.
inline double tplane_perimeter(const std::vector<double>& y, double r, int grid) {
  const std::vector<double> y_inv{-y[0], -y[1], -y[2]};
  const double h = 2.0 * r / grid;
  double sum = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double a = y[0] - r + (i + 0.5) * h;
    for (int j = 0; j < grid; ++j) {
      const double b = y[1] - r + (j + 0.5) * h;
      const std::vector<double> w = heisenberg_product(y_inv, {a, b, 0.0});
      if (koranyi(w) <= r) sum += 0.5 * std::sqrt(a * a + b * b);
    }
  }
  return sum * h * h;
}

/// First sign change of g on [-b, b] by a uniform scan, then bisection.
inline double scan_root(const std::function<double(double)>& g, double b, int steps) {
  double prev = -b;
  double gp = g(prev);
  for (int i = 1; i <= steps; ++i) {
    const double s = -b + 2.0 * b * i / steps;
    const double gs = g(s);
    if ((gp <= 0.0 && gs >= 0.0) || (gp >= 0.0 && gs <= 0.0)) {
      double lo = prev, hi = s;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((g(mid) <= 0.0) == (gp <= 0.0) ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = s;
    gp = gs;
  }
  return std::nan("");
}

}  // namespace oracle
