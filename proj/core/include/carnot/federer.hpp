// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "carnot/estimate.hpp"
#include "carnot/gauge.hpp"
#include "carnot/hypersurface.hpp"

namespace carnot {

struct CenterSearch {
  int multistart_count = 4;
  /// Maximum compass-search iterations per start.
  int local_steps = 40;
  double initial_step = 0.25;
  double min_step = 1.0 / 64.0;
};

/// Finite radius schedule standing in for the limit t -> 0.
struct DensitySchedule {
  std::vector<double> radii;
  CenterSearch center_search;
  std::int64_t samples_per_ball = 200000;
  std::uint64_t seed = 7;

  /// t_k = t0 2^{-k}, k = 0..K.
  static DensitySchedule geometric(double t0, int K, std::int64_t samples, std::uint64_t seed);
  void validate() const;
};

struct RadiusRecord {
  double t = 0.0;
  /// Best center y = x delta_t(w) and its offset w in B(0,1).
  Point best_center;
  Point best_offset;
  /// sigma(B(y, t)) / t^{Q-1} at the best center, re-estimated on
  /// independent samples.
  Estimate ratio;
  /// The maximum found by the search on the frozen samples.
  Estimate search_ratio;
  /// Same ratio at y = x, on the same frozen samples.
  Estimate centered_ratio;
  int evaluations = 0;
};

struct DensityReport {
  std::vector<RadiusRecord> records;
  /// running_sup[k] = max_{j >= k} records[j].ratio.value.
  std::vector<double> running_sup;
  Estimate extrapolated_theta;
  Estimate extrapolated_centered;
  bool converged = false;
  bool truncated = false;
  std::string truncation_reason;
};

/// Inverse-variance weighted mean of the last `tail` estimates.
Estimate tail_average(std::span<const Estimate> values, std::size_t tail = 3);

/// Spherical Federer density of sigma_Sigma at x: per radius, the largest
/// sigma(B(y, t)) / t^{Q-1} over y in B(x, t) by multistart pattern search.
DensityReport federer_density(const SurfaceSpec& s, const Gauge& gauge, const Point& x,
                              const DensitySchedule& sched);

/// Centered (Q-1)-density at x: the ratio at y = x, tail-extrapolated.
Estimate centered_density(const SurfaceSpec& s, const Gauge& gauge, const Point& x,
                          const DensitySchedule& sched);

}  // namespace carnot
