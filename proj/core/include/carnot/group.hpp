// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "carnot/point.hpp"

namespace carnot {

/// One entry of the bracket table: [e_i, e_j] = coefficient * e_k, with
/// 1-based indices i, j in the first layer and k in the second layer
/// (global numbering, so k > dim V1).
struct BracketEntry {
  int i = 0;
  int j = 0;
  int k = 0;
  double coefficient = 0.0;
};

/// A stratified group identified with R^n through exponential coordinates.
///
/// Exact arithmetic is available for step <= 2, where the group law is the
/// Baker-Campbell-Hausdorff product p.q = p + q + [p, q] / 2. Models of
/// higher step may be built (dilations and graded bookkeeping still work) but
/// multiplication throws UnsupportedModelError.
class GroupModel {
 public:
  /// Validates layer dims and the bracket table (antisymmetry, index ranges).
  GroupModel(std::vector<int> layer_dims, std::vector<BracketEntry> brackets);

  /// H^n with [e_{2i-1}, e_{2i}] = e_{2n+1}.
  static GroupModel heisenberg(int n);
  /// R^n with trivial bracket (step 1).
  static GroupModel abelian(int n);

  /// Key-value text:  `layers = 2 1`  and repeated  `bracket = i j k c`.
  static GroupModel parse(std::string_view text);
  static GroupModel load(const std::filesystem::path& path);
  /// "heisenberg:n", "abelian:n", or a path to a key-value file.
  static GroupModel from_spec(std::string_view spec);

  int dimension() const noexcept { return n_; }
  int homogeneous_dimension() const noexcept { return q_; }
  int step() const noexcept { return static_cast<int>(layer_dims_.size()); }
  int horizontal_dim() const noexcept { return layer_dims_[0]; }
  int vertical_dim() const noexcept { return n_ - layer_dims_[0]; }
  const std::vector<int>& layer_dims() const noexcept { return layer_dims_; }
  /// Offset of the first coordinate of layer `layer` (0-based).
  int layer_offset(int layer) const { return offsets_.at(layer); }
  /// Degree (1-based layer number) of coordinate `index`.
  int weight(int index) const { return weights_.at(index); }

  /// Coefficient of [e_i, e_j] on the k-th second-layer basis vector
  /// (all indices 0-based within their layer).
  double bracket(int i, int j, int k) const;
  const std::vector<BracketEntry>& bracket_entries() const noexcept { return entries_; }
  const std::string& name() const noexcept { return name_; }
  GroupModel with_name(std::string name) const;

  // Span-level kernels; callers guarantee conformance. `out` may alias
  // neither input.
  void multiply(std::span<const double> p, std::span<const double> q,
                std::span<double> out) const;
  void dilate(double r, std::span<const double> p, std::span<double> out) const;
  /// Second-layer part of [a, b] for a, b in V1.
  void bracket_vector(std::span<const double> a, std::span<const double> b,
                      std::span<double> out) const;

  void check_conforms(std::span<const double> p) const;
  void check_exact() const;

 private:
  std::vector<int> layer_dims_;
  std::vector<int> offsets_;
  std::vector<int> weights_;
  std::vector<BracketEntry> entries_;
  // table_[k * m * m + i * m + j] = coefficient of [e_i, e_j] on e_{m+k}
  std::vector<double> table_;
  int n_ = 0;
  int q_ = 0;
  std::string name_ = "custom";
};

Point multiply(const GroupModel& g, const Point& p, const Point& q);
Point inverse(const GroupModel& g, const Point& p);
Point dilate(const GroupModel& g, double r, const Point& p);

/// Horizontal point t * nu.
Point horizontal_point(const GroupModel& g, const Direction& nu, double t);

struct Splitting {
  double t = 0.0;
  Point n;  // element of the vertical subgroup N(nu)
};

/// Unique decomposition p = (t nu) . n with n in N(nu).
Splitting split(const GroupModel& g, const Direction& nu, const Point& p);

}  // namespace carnot
