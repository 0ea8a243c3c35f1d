// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace carnot::cli {

/// Runs one command line. Returns 0 on success, 1 on a computation error or
/// a failed verification, 2 on malformed arguments.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace carnot::cli
