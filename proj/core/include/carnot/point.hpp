// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace carnot {

/// A group element in exponential coordinates of a graded basis. Coordinates
/// are stored blockwise per layer: first V1, then V2.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dimension) : coords_(dimension, 0.0) {}
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : coords_(coords) {}

  static Point zero(std::size_t dimension) { return Point(dimension); }

  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }

  std::span<const double> coords() const noexcept { return coords_; }
  std::span<double> coords() noexcept { return coords_; }
  const std::vector<double>& vector() const noexcept { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

/// A unit vector of the first layer V1.
class Direction {
 public:
  /// Normalizes `v`; throws DomainError when `v` is (numerically) zero.
  explicit Direction(std::vector<double> v);
  Direction(std::initializer_list<double> v) : Direction(std::vector<double>(v)) {}

  std::size_t size() const noexcept { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  std::span<const double> components() const noexcept { return v_; }

  Direction operator-() const;

 private:
  std::vector<double> v_;
};

/// Orthonormal basis of V1 (size m x m) whose first row is `nu`.
std::vector<std::vector<double>> horizontal_frame(const Direction& nu);

double dot(std::span<const double> a, std::span<const double> b);
double euclidean_norm(std::span<const double> a);

}  // namespace carnot
