// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include "carnot/group.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "carnot/error.hpp"

namespace carnot {

Direction::Direction(std::vector<double> v) : v_(std::move(v)) {
  const double len = euclidean_norm(v_);
  if (!(len > 1e-300) || !std::isfinite(len)) {
    throw DomainError("direction must be a nonzero finite vector");
  }
  for (double& c : v_) c /= len;
}

Direction Direction::operator-() const {
  std::vector<double> w(v_);
  for (double& c : w) c = -c;
  return Direction(std::move(w));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double euclidean_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::vector<std::vector<double>> horizontal_frame(const Direction& nu) {
  const std::size_t m = nu.size();
  std::vector<std::vector<double>> frame;
  frame.reserve(m);
  frame.emplace_back(nu.components().begin(), nu.components().end());
  // Gram-Schmidt against the standard basis, twice for stability.
  for (std::size_t e = 0; e < m && frame.size() < m; ++e) {
    std::vector<double> v(m, 0.0);
    v[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& f : frame) {
        const double c = dot(v, f);
        for (std::size_t i = 0; i < m; ++i) v[i] -= c * f[i];
      }
    }
    const double len = euclidean_norm(v);
    if (len < 1e-6) continue;
    for (double& c : v) c /= len;
    frame.push_back(std::move(v));
  }
  return frame;
}

GroupModel::GroupModel(std::vector<int> layer_dims, std::vector<BracketEntry> brackets)
    : layer_dims_(std::move(layer_dims)) {
  if (layer_dims_.empty()) throw ModelDefinitionError("group model needs at least one layer");
  for (int d : layer_dims_) {
    if (d <= 0) throw ModelDefinitionError("layer dimensions must be positive");
  }
  int offset = 0;
  for (std::size_t layer = 0; layer < layer_dims_.size(); ++layer) {
    offsets_.push_back(offset);
    for (int c = 0; c < layer_dims_[layer]; ++c) weights_.push_back(static_cast<int>(layer) + 1);
    offset += layer_dims_[layer];
    q_ += static_cast<int>(layer + 1) * layer_dims_[layer];
  }
  n_ = offset;

  if (!brackets.empty() && layer_dims_.size() != 2) {
    // Only step-2 products are implemented; higher steps would need a graded BCH formula.
    throw ModelDefinitionError("bracket tables are only supported for step-2 models");
  }
  if (layer_dims_.size() != 2) return;

  const int m = layer_dims_[0];
  const int v = layer_dims_[1];
  table_.assign(static_cast<std::size_t>(v) * m * m, 0.0);
  std::vector<char> seen(table_.size(), 0);
  for (const BracketEntry& b : brackets) {
    if (b.i < 1 || b.i > m || b.j < 1 || b.j > m) {
      throw ModelDefinitionError("bracket indices i, j must lie in the first layer");
    }
    if (b.k <= m || b.k > m + v) {
      throw ModelDefinitionError("bracket index k must lie in the second layer");
    }
    if (!std::isfinite(b.coefficient)) throw ModelDefinitionError("bracket coefficient must be finite");
    const int i = b.i - 1;
    const int j = b.j - 1;
    const int k = b.k - m - 1;
    if (i == j) {
      if (b.coefficient != 0.0) throw ModelDefinitionError("bracket [e_i, e_i] must vanish");
      continue;
    }
    const std::size_t ij = static_cast<std::size_t>(k) * m * m + i * m + j;
    const std::size_t ji = static_cast<std::size_t>(k) * m * m + j * m + i;
    if (seen[ij]) {
      if (table_[ij] != b.coefficient) {
        throw ModelDefinitionError("conflicting bracket entries for the same (i, j, k)");
      }
      continue;
    }
    if (seen[ji]) {
      if (table_[ji] != -b.coefficient) {
        throw ModelDefinitionError("bracket table is not antisymmetric");
      }
      seen[ij] = 1;
      continue;
    }
    table_[ij] = b.coefficient;
    table_[ji] = -b.coefficient;
    seen[ij] = seen[ji] = 1;
    entries_.push_back(b);
  }
  // Second layer must be generated; a zero bracket image is allowed but
  // means V2 is central and not in [V1, V1], which is not stratified.
  for (int k = 0; k < v; ++k) {
    bool any = false;
    for (int ij = 0; ij < m * m; ++ij) any = any || table_[static_cast<std::size_t>(k) * m * m + ij] != 0.0;
    if (!any) throw ModelDefinitionError("second layer is not generated by brackets of the first layer");
  }
}

GroupModel GroupModel::heisenberg(int n) {
  if (n < 1) throw ModelDefinitionError("heisenberg:n needs n >= 1");
  std::vector<BracketEntry> b;
  for (int i = 1; i <= n; ++i) b.push_back({2 * i - 1, 2 * i, 2 * n + 1, 1.0});
  return GroupModel({2 * n, 1}, std::move(b)).with_name("heisenberg:" + std::to_string(n));
}

GroupModel GroupModel::abelian(int n) {
  if (n < 1) throw ModelDefinitionError("abelian:n needs n >= 1");
  return GroupModel({n}, {}).with_name("abelian:" + std::to_string(n));
}

GroupModel GroupModel::with_name(std::string name) const {
  GroupModel g(*this);
  g.name_ = std::move(name);
  return g;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

int parse_positive_int(std::string_view s, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value < 1) {
    throw ParseError(std::string(what) + ": expected a positive integer, got '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

GroupModel GroupModel::parse(std::string_view text) {
  std::vector<int> dims;
  std::vector<BracketEntry> brackets;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    std::istringstream values(line.substr(eq + 1));
    if (key == "layers") {
      if (!dims.empty()) throw ParseError("line " + std::to_string(lineno) + ": duplicate 'layers'");
      std::string tok;
      while (values >> tok) dims.push_back(parse_positive_int(tok, "layers"));
      if (dims.empty()) throw ParseError("line " + std::to_string(lineno) + ": 'layers' is empty");
    } else if (key == "bracket") {
      BracketEntry b;
      std::string extra;
      if (!(values >> b.i >> b.j >> b.k >> b.coefficient) || (values >> extra)) {
        throw ParseError("line " + std::to_string(lineno) + ": bracket needs 'i j k coefficient'");
      }
      brackets.push_back(b);
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (dims.empty()) throw ParseError("group model is missing 'layers'");
  return GroupModel(std::move(dims), std::move(brackets));
}

GroupModel GroupModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open group model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str()).with_name(path.filename().string());
}

GroupModel GroupModel::from_spec(std::string_view spec) {
  auto numbered = [&](std::string_view prefix) -> int {
    return parse_positive_int(spec.substr(prefix.size()), prefix.substr(0, prefix.size() - 1));
  };
  if (spec.starts_with("heisenberg:")) return heisenberg(numbered("heisenberg:"));
  if (spec.starts_with("abelian:")) return abelian(numbered("abelian:"));
  return load(std::filesystem::path(spec));
}

double GroupModel::bracket(int i, int j, int k) const {
  if (step() != 2) return 0.0;
  const int m = layer_dims_[0];
  return table_[static_cast<std::size_t>(k) * m * m + i * m + j];
}

void GroupModel::check_conforms(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != n_) {
    throw ConformanceError("point has " + std::to_string(p.size()) + " coordinates, model needs " +
                           std::to_string(n_));
  }
}

void GroupModel::check_exact() const {
  if (step() > 2) {
    throw UnsupportedModelError("exact group arithmetic is limited to step <= 2 (model has step " +
                                std::to_string(step()) + ")");
  }
}

void GroupModel::bracket_vector(std::span<const double> a, std::span<const double> b,
                                std::span<double> out) const {
  const int m = layer_dims_[0];
  const int v = step() == 2 ? layer_dims_[1] : 0;
  for (int k = 0; k < v; ++k) {
    const double* row = table_.data() + static_cast<std::size_t>(k) * m * m;
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
      if (a[i] == 0.0) continue;
      double inner = 0.0;
      for (int j = 0; j < m; ++j) inner += row[i * m + j] * b[j];
      s += a[i] * inner;
    }
    out[k] = s;
  }
}

void GroupModel::multiply(std::span<const double> p, std::span<const double> q,
                          std::span<double> out) const {
  for (int i = 0; i < n_; ++i) out[i] = p[i] + q[i];
  if (step() == 2) {
    const int m = layer_dims_[0];
    const int v = layer_dims_[1];
    for (int k = 0; k < v; ++k) {
      const double* row = table_.data() + static_cast<std::size_t>(k) * m * m;
      double s = 0.0;
      for (int i = 0; i < m; ++i) {
        if (p[i] == 0.0) continue;
        double inner = 0.0;
        for (int j = 0; j < m; ++j) inner += row[i * m + j] * q[j];
        s += p[i] * inner;
      }
      out[m + k] += 0.5 * s;
    }
  }
}

void GroupModel::dilate(double r, std::span<const double> p, std::span<double> out) const {
  double scale = r;
  for (std::size_t layer = 0; layer < layer_dims_.size(); ++layer) {
    const int begin = offsets_[layer];
    const int end = begin + layer_dims_[layer];
    for (int i = begin; i < end; ++i) out[i] = scale * p[i];
    scale *= r;
  }
}

Point multiply(const GroupModel& g, const Point& p, const Point& q) {
  g.check_conforms(p.coords());
  g.check_conforms(q.coords());
  g.check_exact();
  Point out(p.size());
  g.multiply(p.coords(), q.coords(), out.coords());
  return out;
}

Point inverse(const GroupModel& g, const Point& p) {
  g.check_conforms(p.coords());
  g.check_exact();
  Point out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = -p[i];
  return out;
}

Point dilate(const GroupModel& g, double r, const Point& p) {
  g.check_conforms(p.coords());
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("dilation factor must be positive and finite");
  Point out(p.size());
  g.dilate(r, p.coords(), out.coords());
  return out;
}

Point horizontal_point(const GroupModel& g, const Direction& nu, double t) {
  if (static_cast<int>(nu.size()) != g.horizontal_dim()) {
    throw ConformanceError("direction must have dim V1 = " + std::to_string(g.horizontal_dim()) +
                           " components");
  }
  Point out(static_cast<std::size_t>(g.dimension()));
  for (std::size_t i = 0; i < nu.size(); ++i) out[i] = t * nu[i];
  return out;
}

Splitting split(const GroupModel& g, const Direction& nu, const Point& p) {
  g.check_conforms(p.coords());
  g.check_exact();
  const std::size_t m = static_cast<std::size_t>(g.horizontal_dim());
  if (nu.size() != m) throw ConformanceError("direction does not match dim V1");
  // For step 2 the H-component is the linear projection onto R nu and
  // n = (t nu)^{-1} . p.
  const double t = dot(p.coords().first(m), nu.components());
  Point n(p.size());
  g.multiply(horizontal_point(g, nu, -t).coords(), p.coords(), n.coords());
  // Remove the residual nu-component left by rounding.
  const double residual = dot(n.coords().first(m), nu.components());
  for (std::size_t i = 0; i < m; ++i) n[i] -= residual * nu[i];
  return {t, std::move(n)};
}

}  // namespace carnot
