// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace carnot {

/// Caps the number of worker threads used by the library (0 = hardware
/// concurrency). Results never depend on this value.
void set_max_workers(unsigned workers);
unsigned max_workers();

/// Runs body(i) for i in [0, count). Each index must write only to its own
/// output slot; reductions happen afterwards in index order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace carnot
