// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

namespace carnot {

/// Monte-Carlo estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

inline double joint_stderr(const Estimate& a, const Estimate& b) {
  return std::hypot(a.std_error, b.std_error);
}

/// |a - b| <= k * sqrt(se_a^2 + se_b^2)
inline bool agree_within(const Estimate& a, const Estimate& b, double k = 3.0) {
  return std::abs(a.value - b.value) <= k * joint_stderr(a, b);
}

}  // namespace carnot
