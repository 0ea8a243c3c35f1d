// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/point.hpp"
#include "carnot/random.hpp"

namespace carnot {

enum class GaugeKind { koranyi, d_infty, star_body };

/// Membership predicate of a compact body that contains a neighborhood of the
/// identity and is star-shaped with respect to dilations. Must be pure.
using BodyOracle = std::function<bool(std::span<const double>)>;

struct StarBody {
  BodyOracle contains;
  /// Euclidean bound of each layer block over the body (|x_j| <= bound_j).
  std::vector<double> layer_bounds;
  double tolerance = 1e-10;
};

struct GaugeFlags {
  bool declared_convex = false;
  bool declared_v1_symmetric = false;
};

/// A homogeneous norm on a group model; the unit ball B(0,1) is
/// {p : norm(p) <= 1} and d(p, q) = norm(p^{-1} q).
class Gauge {
 public:
  /// (|x1|^4 + 16 |x2|^2)^{1/4}
  static Gauge koranyi(GroupModel model);
  /// max_j eps_j |x_j|^{1/j}; `eps` has one entry per layer and eps[0] == 1.
  static Gauge d_infty(GroupModel model, std::vector<double> eps);
  static Gauge star_body(GroupModel model, StarBody body, GaugeFlags flags, std::string name);

  /// Euclidean ball of radius rho in exponential coordinates.
  static Gauge star_ball(GroupModel model, double rho);
  /// Union of two Euclidean balls of radius `radius` centered at +-offset * e_axis
  /// (0-based coordinate). Non-convex whenever the offset is positive.
  static Gauge two_ball(GroupModel model, double radius, double offset, int axis = 0);
  /// Korányi-type body with the l^1 norm on V1; not rotation invariant.
  static Gauge anisotropic(GroupModel model);

  /// "koranyi", "dinf:eps2=0.5", "starball:rho=0.5", "twoball:r=0.5,c=0.3",
  /// "aniso".
  static Gauge from_spec(GroupModel model, std::string_view spec);

  double norm(std::span<const double> p) const;
  double norm(const Point& p) const { return norm(p.coords()); }
  /// norm(p) <= 1 without root finding.
  bool in_unit_ball(std::span<const double> p) const;
  /// norm(p) <= radius.
  bool in_ball(std::span<const double> p, double radius) const;

  const GroupModel& model() const noexcept { return *model_; }
  GaugeKind kind() const noexcept { return kind_; }
  const GaugeFlags& flags() const noexcept { return flags_; }
  const std::string& name() const noexcept { return name_; }
  /// Horizontal radius of the unit ball: |h| <= r0 for h in B(0,1) cap V1.
  double r0() const noexcept { return r0_; }
  const std::vector<double>& layer_bounds() const noexcept { return layer_bounds_; }
  const std::vector<double>& eps() const noexcept { return eps_; }
  /// Relative accuracy of norm(): 0 for closed forms, the bisection tolerance
  /// for star bodies.
  double tolerance() const noexcept { return kind_ == GaugeKind::star_body ? body_.tolerance : 0.0; }
  bool closed_form() const noexcept { return kind_ != GaugeKind::star_body; }

 private:
  Gauge() = default;

  std::shared_ptr<const GroupModel> model_;
  GaugeKind kind_ = GaugeKind::koranyi;
  GaugeFlags flags_;
  std::string name_;
  std::vector<double> eps_;
  StarBody body_;
  std::vector<double> layer_bounds_;
  double r0_ = 1.0;
};

double distance(const Gauge& gauge, const Point& p, const Point& q);

/// Unique r > 0 with delta_{1/r} p on the boundary of the body, by bracketing
/// and bisection to relative tolerance `tol`. `layer_bounds` seed the bracket.
double star_norm(const GroupModel& model, const BodyOracle& oracle,
                 std::span<const double> layer_bounds, std::span<const double> p, double tol);

struct ValidationCheck {
  std::string name;
  std::int64_t trials = 0;
  std::int64_t violations = 0;
  double worst_violation = 0.0;
};

struct ValidationReport {
  std::string gauge;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<ValidationCheck> checks;
  double worst_violation = 0.0;
  std::string worst_check;
  std::optional<std::pair<Point, Point>> witness;

  bool passed() const;
  std::int64_t violations(std::string_view check) const;
};

/// Sampled checks of homogeneity, inversion symmetry and the triangle
/// inequality on `samples` random pairs inside the ball of radius 4.
/// Violations are reported, never thrown.
ValidationReport validate(const Gauge& gauge, std::int64_t samples, std::uint64_t seed);

struct CalibrationCandidate {
  double eps2 = 0.0;
  bool passed = false;
  double worst_violation = 0.0;
};

struct CalibrationResult {
  std::string group;
  double eps2 = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<CalibrationCandidate> candidates;
  /// Always "sample-certified": feasibility is established by sampling only.
  std::string certification = "sample-certified";
};

/// Largest grid value of eps2 for which the d_infty gauge passes validate().
/// Throws CalibrationError when no candidate passes.
CalibrationResult calibrate_dinfty(const GroupModel& model, std::vector<double> grid,
                                   std::int64_t samples, std::uint64_t seed);

/// Midpoint convexity sampler: random p, q in B(0,1); the coordinate midpoint
/// must satisfy norm <= 1 + slack.
struct ConvexityResult {
  std::int64_t trials = 0;
  std::int64_t violations = 0;
  std::optional<std::pair<Point, Point>> witness;
};
ConvexityResult midpoint_convexity(const Gauge& gauge, std::int64_t samples, std::uint64_t seed,
                                   double slack = 1e-9);

/// Uniform sample of B(0,1) by rejection from the layer-bound box.
/// Returns false after `max_tries` misses.
bool sample_unit_ball(const Gauge& gauge, Rng& rng, std::span<double> out, int max_tries = 100000);

}  // namespace carnot
