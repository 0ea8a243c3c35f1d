// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "carnot/estimate.hpp"
#include "carnot/gauge.hpp"
#include "carnot/slice.hpp"

namespace carnot {

enum class BetaMethod { convex_fast_path, grid_refine };

std::string_view to_string(BetaMethod method);

/// omega_{G,Q-1} = beta and c_{Q-1} = omega / 2^{Q-1}.
struct SphericalConstants {
  double omega = 0.0;
  double c = 0.0;
  double omega_stderr = 0.0;
  double c_stderr = 0.0;
};

SphericalConstants spherical_constants(const Estimate& beta, int homogeneous_dimension);

struct BetaOptions {
  std::int64_t samples = 100000;
  int grid_size = 41;
  std::uint64_t seed = 7;
  std::int64_t convexity_samples = 20000;
  int refine_iterations = 12;
  /// Skip the convex fast path even when the ball is certified convex.
  bool force_grid = false;
  /// Outcome of a prior validate() run; a failed run refuses the computation
  /// unless `override_validation` is set.
  std::optional<bool> validation_passed;
  bool override_validation = false;
};

struct BetaResult {
  Direction nu;
  Estimate value;
  double argmax_t = 0.0;
  BetaMethod method = BetaMethod::grid_refine;
  SphericalConstants constants;
  /// grid_refine only: whether golden-section refinement was used.
  bool unimodal_bracket = false;
  std::optional<SliceProfile> profile;
};

/// beta(d, nu): the largest vertical slice area of the unit ball over all
/// parallel slices t nu + N(nu).
BetaResult beta(const Gauge& gauge, const Direction& nu, const BetaOptions& opts);

/// grid_refine path on an already sampled profile: best grid point, then
/// golden-section refinement where the profile is locally unimodal, else
/// local grid halving.
BetaResult refine_beta(const Gauge& gauge, SliceProfile profile, const BetaOptions& opts);

struct ConstancyReport {
  std::vector<BetaResult> results;
  double max_deviation = 0.0;
  /// Largest |b_i - b_j| / sqrt(se_i^2 + se_j^2) over all pairs.
  double max_deviation_sigma = 0.0;
  bool constant = true;
  std::uint64_t seed = 0;
};

/// beta for `n_directions` uniformly random unit directions of V1.
ConstancyReport beta_constancy(const Gauge& gauge, int n_directions, const BetaOptions& opts,
                               std::uint64_t seed);

/// Uniformly distributed unit vector of V1 from substream (seed, index).
Direction random_direction(const GroupModel& model, std::uint64_t seed, std::uint64_t index);

}  // namespace carnot
