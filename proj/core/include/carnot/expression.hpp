// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace carnot {

/// Arithmetic expression over coordinates x1..xn: + - * / ^, parentheses,
/// unary minus, numbers, `pi`, and sin cos exp log sqrt abs.
/// Compiled once to a postfix program; evaluation is const and thread-safe.
class Expression {
 public:
  static Expression parse(std::string_view text, int n_vars);

  double evaluate(std::span<const double> x) const;
  const std::string& text() const noexcept { return text_; }

 private:
  enum class Op : unsigned char { constant, variable, add, sub, mul, div, pow, neg, sin, cos, exp, log, sqrt, abs };
  struct Instr {
    Op op;
    double value = 0.0;
    int index = 0;
  };

  std::vector<Instr> program_;
  std::string text_;

  friend class ExpressionParser;
};

}  // namespace carnot
