// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carnot/estimate.hpp"
#include "carnot/gauge.hpp"
#include "carnot/group.hpp"

namespace carnot {

using ScalarField = std::function<double(std::span<const double>)>;
/// Writes (X_1 f, ..., X_m f)(p) for the left-invariant fields of the
/// standard basis e_1..e_m of V1.
using HorizontalGradient = std::function<void(std::span<const double>, std::span<double>)>;

/// Minimum |grad_H f| accepted as G-regular.
inline constexpr double kRegularityFloor = 1e-6;

/// A G-regular hypersurface {f = 0} near a base point x, together with the
/// horizontal frame (X_1, ..., X_m) whose first vector is the horizontal
/// normal at x. The callbacks must be pure; they are evaluated concurrently.
class SurfaceSpec {
 public:
  /// `grad_h` may be empty, in which case horizontal derivatives are taken by
  /// central differences along group lines p (s e_j), Richardson-corrected.
  SurfaceSpec(GroupModel model, ScalarField f, HorizontalGradient grad_h, Point base, std::string name);

  /// Same surface, based at another point of it.
  SurfaceSpec rebased(Point base) const;

  double value(std::span<const double> p) const { return f_(p); }
  void horizontal_gradient(std::span<const double> p, std::span<double> out) const;
  std::vector<double> horizontal_gradient(const Point& p) const;

  const GroupModel& model() const noexcept { return model_; }
  const Point& base() const noexcept { return base_; }
  /// Row k is X_{k+1} expressed in the standard basis of V1.
  const std::vector<std::vector<double>>& frame() const noexcept { return frame_; }
  const Direction& base_normal() const noexcept { return *normal_; }
  const std::string& name() const noexcept { return name_; }
  bool analytic_gradient() const noexcept { return static_cast<bool>(grad_h_); }

 private:
  GroupModel model_;
  ScalarField f_;
  HorizontalGradient grad_h_;
  Point base_;
  std::string name_;
  std::vector<std::vector<double>> frame_;
  std::optional<Direction> normal_;
};

/// f(p) = c0 + <a, p1> + <b, p2> + p1^T A p1 / 2, with analytic horizontal
/// gradient. `quadratic` is m x m row-major (may be empty).
SurfaceSpec quadric_surface(GroupModel model, double c0, std::vector<double> a, std::vector<double> b,
                            std::vector<double> quadratic, Point base, std::string name);

/// The vertical plane x N(nu) = {<p1, nu> = <x1, nu>}.
SurfaceSpec vertical_plane(GroupModel model, const Direction& nu, Point base);

/// {p_{m+1} = x_{m+1}}: the level set of the first vertical coordinate.
SurfaceSpec coordinate_plane(GroupModel model, Point base);

/// f given as an expression over x1..xn, shifted so that f(base) = 0 is
/// required (not enforced by shifting).
SurfaceSpec expression_surface(GroupModel model, std::string_view expression, Point base);

/// "vplane" / "vplane:nu=a,b", "tplane", "expr:<expression>".
SurfaceSpec surface_from_spec(const GroupModel& model, std::string_view spec, const Point& base);

/// nu_Sigma(p) = grad_H f(p) / |grad_H f(p)|; throws RegularityError when the
/// horizontal gradient vanishes.
Direction horizontal_normal(const SurfaceSpec& s, const Point& p);

/// phi(n) with f(x n (phi(n) X_1)) = 0 for n in N, by bisection on
/// [-bracket, bracket]. Throws BracketError without a sign change.
double graph_height(const SurfaceSpec& s, const Point& n, double bracket);

/// Embeds rescaled chart coordinates of N = span(X_2..X_m) + V2 as the group
/// element Lambda_t(eta).
void embed_vertical(const SurfaceSpec& s, double t, std::span<const double> chart, std::span<double> out);

struct PerimeterEstimate {
  Point center;
  double radius = 0.0;
  Estimate value;
};

struct SamplerStats {
  std::int64_t samples = 0;
  std::int64_t kept = 0;
  std::int64_t failures = 0;
  std::vector<double> half_widths;
  double box_volume = 0.0;
};

/// Frozen Monte-Carlo sample of the surface patch covering B(center, radius):
/// eta is drawn uniformly from a box K0 in rescaled N-coordinates
/// that provably contains every hit, mapped to
/// Phi(Lambda_t eta) = x Lambda_t(eta) (phi X_1), and kept with its density
/// alpha = |grad_H f| / X_1 f when Phi lies in the coverage ball. Every
/// evaluate() call reuses the same samples (common random numbers).
class PerimeterSampler {
 public:
  PerimeterSampler(const SurfaceSpec& s, const Gauge& gauge, double scale, const Point& center,
                   double radius, std::int64_t n_samples, std::uint64_t seed);

  /// sigma_Sigma(B(y, r)); B(y, r) must lie inside the coverage ball.
  Estimate evaluate(const Point& y, double r) const;

  const SamplerStats& stats() const noexcept { return stats_; }
  double scale() const noexcept { return scale_; }

 private:
  Gauge gauge_;
  double scale_;
  Point center_;
  double radius_;
  std::uint64_t seed_;
  double weight_ = 0.0;  // t^{Q-1} * |K0|
  std::vector<double> points_;
  std::vector<double> alpha_;
  SamplerStats stats_;
};

/// sigma_Sigma(B(y, t)) through the graph integral.
PerimeterEstimate perimeter_ball(const SurfaceSpec& s, const Gauge& gauge, const Point& y, double t,
                                 std::int64_t n_samples, std::uint64_t seed);

}  // namespace carnot
