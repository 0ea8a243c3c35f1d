// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "carnot/estimate.hpp"
#include "carnot/gauge.hpp"

namespace carnot {

// Vertical slices of the unit ball: psi(t) is the (n-1)-dimensional Lebesgue
// measure of B(0,1) cap (t nu + N(nu)), where N(nu) = nu^perp + V2 is the
// vertical subgroup orthogonal to nu.

/// Hit-or-miss estimate of psi(t). Requires n_samples >= 1000.
Estimate slice_area(const Gauge& gauge, const Direction& nu, double t, std::int64_t n_samples,
                    std::uint64_t seed);

/// H^{n-1}(B(z,1) cap N(nu)), sampled directly on N(nu) through the distance
/// to z. Independent of the reduction to slice offsets.
Estimate translated_slice_area(const Gauge& gauge, const Direction& nu, const Point& z,
                               std::int64_t n_samples, std::uint64_t seed);

/// Bound T with psi(t) = 0 for |t| > T, located by bisection on slice
/// emptiness.
double slice_support(const Gauge& gauge, const Direction& nu, std::uint64_t seed);

struct SliceProfile {
  Direction nu;
  std::vector<double> grid;
  std::vector<Estimate> areas;
  double support = 0.0;
  std::uint64_t seed = 0;

  /// Index of the grid point t = 0.
  std::size_t center_index() const { return grid.size() / 2; }
};

/// Symmetric odd-size grid on [-T, T] with an estimate of psi at each point.
SliceProfile slice_profile(const Gauge& gauge, const Direction& nu, int grid_size,
                           std::int64_t samples_per_point, std::uint64_t seed);

struct ConcavityReport {
  double exponent = 1.0;
  std::int64_t triples = 0;
  std::int64_t violations = 0;
  /// Smallest value of g(t) - (g(t-h) + g(t+h)) / 2 over all triples, with
  /// g = psi^exponent, and the same margin in units of its propagated stderr.
  double worst_margin = 0.0;
  double worst_sigma = 0.0;
  double worst_t = 0.0;
};

/// Midpoint concavity of psi^exponent on the profile grid; a triple is a
/// violation when the margin is below -3 propagated standard errors.
ConcavityReport concavity_report(const SliceProfile& profile, double exponent);

/// 1 / (n - 1)
double busemann_exponent(const GroupModel& model);

}  // namespace carnot
