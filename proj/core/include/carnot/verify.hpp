// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "carnot/beta.hpp"
#include "carnot/federer.hpp"
#include "carnot/gauge.hpp"
#include "carnot/hypersurface.hpp"

namespace carnot {

struct Check {
  std::string name;
  double target = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// Recorded but not counted: the suite's hypothesis does not hold.
  bool informational = false;
  std::string detail;
};

/// Outcome of one verification suite. `pass` holds exactly when every
/// non-informational check passes. When `hypothesis_met` is false the
/// conclusions are not implied and their checks are informational.
struct VerificationReport {
  std::string suite;
  std::string gauge;
  std::vector<Check> checks;
  std::uint64_t seed = 0;
  bool hypothesis_met = true;
  bool pass = true;
  std::map<std::string, double> values;

  Check& add(Check c);
  const Check* find(const std::string& name) const;
  void finalize();
};

VerificationReport convexity_check(const Gauge& gauge, std::int64_t samples, std::uint64_t seed);

/// Orthogonal maps of V1 as row-major m x m matrices.
using Rotation = std::vector<double>;

/// Random orthogonal matrix (Haar measure) from substream (seed, index).
Rotation random_rotation(int m, std::uint64_t seed, std::uint64_t index);

/// The two conditions of V1-vertical symmetry: (1) the horizontal
/// projection of B(0,1) is the disc B(0,1) cap V1 of radius r0, and
/// (2) B(0,1) is invariant under the rotation family acting on V1.
/// An empty family means sampled full rotations.
VerificationReport symmetry_check(const Gauge& gauge, const std::vector<Rotation>& rotations,
                                  std::int64_t samples, std::uint64_t seed);

struct BusemannOptions {
  int grid_size = 41;
  std::int64_t samples = 100000;
  std::int64_t convexity_samples = 20000;
  std::uint64_t seed = 7;
};

/// Slice concavity and central-slice maximality on a ball certified convex.
VerificationReport busemann_suite(const Gauge& gauge, const Direction& nu, const BusemannOptions& opts);

VerificationReport constancy_suite(const Gauge& gauge, int n_directions, const BetaOptions& opts,
                                   std::uint64_t seed);

struct BlowupOptions {
  double relative_tolerance = 0.05;
  BetaOptions beta;
  /// Also compare centered and off-centered tails (convex balls only).
  bool check_centered = true;
};

/// Spherical Federer density versus beta(d, nu_Sigma(x)) at each surface's
/// base point; emits omega_{G,Q-1} and c_{Q-1} when the betas agree.
VerificationReport blowup_suite(const std::vector<SurfaceSpec>& surfaces, const Gauge& gauge,
                                const DensitySchedule& sched, const BlowupOptions& opts);

struct ExactnessOptions {
  int cases = 1000;
  std::int64_t slice_samples = 10000;
  std::uint64_t seed = 7;
};

/// Group-law and gauge identities on randomized cases: associativity,
/// dilation automorphism, split recomposition, homogeneity, ball inversion
/// symmetry, and evenness of the slice function.
VerificationReport exactness_suite(const Gauge& gauge, const ExactnessOptions& opts);

}  // namespace carnot
