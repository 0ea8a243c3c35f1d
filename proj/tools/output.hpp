// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace carnot::cli {

using Cell = std::variant<std::string, double, std::int64_t, std::uint64_t, bool>;

/// One output artifact: the resolved configuration, scalar results and a
/// table of rows. CSV writes the first two as `# key: value` lines.
struct Table {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void set(std::string key, Cell value) { summary.emplace_back(std::move(key), std::move(value)); }
};

/// Shortest round-trip decimal form.
std::string format_double(double v);
std::string format_cell(const Cell& c);

std::string to_csv(const Table& t);
std::string to_json(const Table& t);
/// Fixed-width human-readable rendering of the rows.
std::string to_text(const Table& t);

}  // namespace carnot::cli
