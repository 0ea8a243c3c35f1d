// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include "carnot/expression.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "carnot/error.hpp"

namespace carnot {

namespace {
constexpr int kMaxStack = 64;
}

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, int n_vars) : text_(text), n_vars_(n_vars) {}

  Expression run() {
    Expression e;
    e.text_ = std::string(text_);
    out_ = &e.program_;
    expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    if (max_depth_ > kMaxStack) fail("expression nests too deeply");
    return e;
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + std::string(text_) + "' at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void emit(Op op, double value = 0.0, int index = 0) {
    out_->push_back({op, value, index});
    switch (op) {
      case Op::constant:
      case Op::variable:
        ++depth_;
        break;
      case Op::add:
      case Op::sub:
      case Op::mul:
      case Op::div:
      case Op::pow:
        --depth_;
        break;
      default:
        break;
    }
    max_depth_ = std::max(max_depth_, depth_);
  }

  void expr() {
    term();
    for (;;) {
      if (accept('+')) {
        term();
        emit(Op::add);
      } else if (accept('-')) {
        term();
        emit(Op::sub);
      } else {
        return;
      }
    }
  }

  void term() {
    unary();
    for (;;) {
      if (accept('*')) {
        unary();
        emit(Op::mul);
      } else if (accept('/')) {
        unary();
        emit(Op::div);
      } else {
        return;
      }
    }
  }

  void unary() {
    if (accept('-')) {
      unary();
      emit(Op::neg);
    } else if (accept('+')) {
      unary();
    } else {
      power();
    }
  }

  void power() {
    primary();
    if (accept('^')) {
      unary();
      emit(Op::pow);
    }
  }

  void primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (accept('(')) {
      expr();
      if (!accept(')')) fail("expected ')'");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
      if (ec != std::errc()) fail("bad number");
      pos_ = static_cast<std::size_t>(ptr - text_.data());
      emit(Op::constant, value);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) ++end;
      const std::string_view word = text_.substr(pos_, end - pos_);
      pos_ = end;
      if (word == "pi") {
        emit(Op::constant, std::numbers::pi);
        return;
      }
      if (word.size() > 1 && word[0] == 'x') {
        int index = 0;
        auto [ptr, ec] = std::from_chars(word.data() + 1, word.data() + word.size(), index);
        if (ec != std::errc() || ptr != word.data() + word.size() || index < 1 || index > n_vars_) {
          fail("unknown coordinate '" + std::string(word) + "' (expected x1..x" + std::to_string(n_vars_) + ")");
        }
        emit(Op::variable, 0.0, index - 1);
        return;
      }
      static constexpr std::array<std::pair<std::string_view, Op>, 6> kFunctions{{
          {"sin", Op::sin}, {"cos", Op::cos}, {"exp", Op::exp},
          {"log", Op::log}, {"sqrt", Op::sqrt}, {"abs", Op::abs},
      }};
      for (const auto& [name, op] : kFunctions) {
        if (word == name) {
          if (!accept('(')) fail("expected '(' after " + std::string(name));
          expr();
          if (!accept(')')) fail("expected ')'");
          emit(op);
          return;
        }
      }
      fail("unknown identifier '" + std::string(word) + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  int n_vars_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  int max_depth_ = 0;
  std::vector<Expression::Instr>* out_ = nullptr;
};

Expression Expression::parse(std::string_view text, int n_vars) {
  return ExpressionParser(text, n_vars).run();
}

double Expression::evaluate(std::span<const double> x) const {
  std::array<double, kMaxStack> stack;
  int top = -1;
  for (const Instr& in : program_) {
    switch (in.op) {
      case Op::constant: stack[++top] = in.value; break;
      case Op::variable: stack[++top] = x[static_cast<std::size_t>(in.index)]; break;
      case Op::add: stack[top - 1] += stack[top]; --top; break;
      case Op::sub: stack[top - 1] -= stack[top]; --top; break;
      case Op::mul: stack[top - 1] *= stack[top]; --top; break;
      case Op::div: stack[top - 1] /= stack[top]; --top; break;
      case Op::pow: stack[top - 1] = std::pow(stack[top - 1], stack[top]); --top; break;
      case Op::neg: stack[top] = -stack[top]; break;
      case Op::sin: stack[top] = std::sin(stack[top]); break;
      case Op::cos: stack[top] = std::cos(stack[top]); break;
      case Op::exp: stack[top] = std::exp(stack[top]); break;
      case Op::log: stack[top] = std::log(stack[top]); break;
      case Op::sqrt: stack[top] = std::sqrt(stack[top]); break;
      case Op::abs: stack[top] = std::abs(stack[top]); break;
    }
  }
  return stack[0];
}

}  // namespace carnot
