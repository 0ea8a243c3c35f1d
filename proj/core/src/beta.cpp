// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include "carnot/beta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "carnot/error.hpp"
#include "carnot/random.hpp"

namespace carnot {

std::string_view to_string(BetaMethod method) {
  return method == BetaMethod::convex_fast_path ? "convex_fast_path" : "grid_refine";
}

SphericalConstants spherical_constants(const Estimate& beta, int homogeneous_dimension) {
  const double scale = std::ldexp(1.0, -(homogeneous_dimension - 1));
  return {beta.value, beta.value * scale, beta.std_error, beta.std_error * scale};
}

Direction random_direction(const GroupModel& model, std::uint64_t seed, std::uint64_t index) {
  Rng rng(seed, {0xd1ec7ULL, index});
  std::vector<double> v(static_cast<std::size_t>(model.horizontal_dim()));
  for (;;) {
    for (double& c : v) c = rng.normal();
    if (euclidean_norm(v) > 1e-8) return Direction(v);
  }
}

namespace {

// Ties go to the smaller |t|.
bool better(double value, double t, double best_value, double best_t) {
  if (value != best_value) return value > best_value;
  return std::abs(t) < std::abs(best_t);
}

}  // namespace

BetaResult beta(const Gauge& gauge, const Direction& nu, const BetaOptions& opts) {
  if (opts.validation_passed.has_value() && !*opts.validation_passed && !opts.override_validation) {
    throw RefusalError("gauge '" + gauge.name() +
                       "' failed validation; rerun with a calibrated gauge or override explicitly");
  }
  const int Q = gauge.model().homogeneous_dimension();

  if (gauge.flags().declared_convex && !opts.force_grid) {
    const ConvexityResult convex =
        midpoint_convexity(gauge, opts.convexity_samples, derive_seed(opts.seed, {0xc0ULL}));
    if (convex.violations == 0) {
      const Estimate central = slice_area(gauge, nu, 0.0, opts.samples, opts.seed);
      return {nu, central, 0.0, BetaMethod::convex_fast_path, spherical_constants(central, Q), false,
              std::nullopt};
    }
  }

  return refine_beta(gauge, slice_profile(gauge, nu, opts.grid_size, opts.samples, opts.seed), opts);
}

BetaResult refine_beta(const Gauge& gauge, SliceProfile profile, const BetaOptions& opts) {
  const Direction& nu = profile.nu;
  const int Q = gauge.model().homogeneous_dimension();
  std::size_t best = profile.center_index();
  for (std::size_t i = 0; i < profile.grid.size(); ++i) {
    if (better(profile.areas[i].value, profile.grid[i], profile.areas[best].value, profile.grid[best])) best = i;
  }

  const auto& a = profile.areas;
  const std::size_t n = a.size();
  bool unimodal = best >= 1 && best + 1 < n && a[best - 1].value <= a[best].value &&
                  a[best + 1].value <= a[best].value;
  if (unimodal && best >= 2) unimodal = a[best - 2].value <= a[best - 1].value;
  if (unimodal && best + 2 < n) unimodal = a[best + 2].value <= a[best + 1].value;

  // Common random numbers across refinement candidates.
  const std::uint64_t refine_seed = derive_seed(opts.seed, {0x7ef1eULL});
  auto eval = [&](double t) { return slice_area(gauge, nu, t, opts.samples, refine_seed).value; };

  double best_t = profile.grid[best];
  double best_value = eval(best_t);
  if (unimodal) {
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = profile.grid[best - 1];
    double hi = profile.grid[best + 1];
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = eval(x1);
    double f2 = eval(x2);
    for (int it = 0; it < opts.refine_iterations; ++it) {
      if (f1 >= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = eval(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = eval(x2);
      }
      if (better(f1, x1, best_value, best_t)) best_value = f1, best_t = x1;
      if (better(f2, x2, best_value, best_t)) best_value = f2, best_t = x2;
    }
  } else {
    double step = profile.grid.size() > 1 ? 0.5 * (profile.grid[1] - profile.grid[0]) : 0.0;
    for (int it = 0; it < opts.refine_iterations && step > 0.0; ++it) {
      const double center = best_t;
      for (double t : {center - step, center + step}) {
        if (std::abs(t) > profile.support) continue;
        const double v = eval(t);
        if (better(v, t, best_value, best_t)) best_value = v, best_t = t;
      }
      step *= 0.5;
    }
  }

  // Re-estimate on a fresh stream so the reported value is free of the
  // selection bias of the maximization.
  const Estimate final_value =
      slice_area(gauge, nu, best_t, opts.samples, derive_seed(opts.seed, {0xf1a1ULL}));
  BetaResult result{profile.nu, final_value, best_t, BetaMethod::grid_refine, spherical_constants(final_value, Q),
                    unimodal, std::move(profile)};
  return result;
}

ConstancyReport beta_constancy(const Gauge& gauge, int n_directions, const BetaOptions& opts,
                               std::uint64_t seed) {
  if (n_directions < 2) throw DomainError("beta_constancy needs at least two directions");
  ConstancyReport report;
  report.seed = seed;
  for (int k = 0; k < n_directions; ++k) {
    BetaOptions o = opts;
    o.seed = derive_seed(seed, {0xbe7aULL, static_cast<std::uint64_t>(k)});
    report.results.push_back(beta(gauge, random_direction(gauge.model(), seed, k), o));
  }
  for (std::size_t i = 0; i < report.results.size(); ++i) {
    for (std::size_t j = i + 1; j < report.results.size(); ++j) {
      const Estimate& a = report.results[i].value;
      const Estimate& b = report.results[j].value;
      const double dev = std::abs(a.value - b.value);
      const double joint = joint_stderr(a, b);
      report.max_deviation = std::max(report.max_deviation, dev);
      const double sigma = joint > 0.0 ? dev / joint : (dev > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      report.max_deviation_sigma = std::max(report.max_deviation_sigma, sigma);
      if (dev > 3.0 * joint) report.constant = false;
    }
  }
  return report;
}

}  // namespace carnot
