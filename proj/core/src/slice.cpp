// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include "carnot/slice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "carnot/error.hpp"
#include "carnot/parallel.hpp"
#include "carnot/random.hpp"

namespace carnot {

namespace {

constexpr std::int64_t kBatch = 8192;

// Affine chart of t nu + N(nu): horizontal frame coordinates first, then the
// vertical coordinates.
struct SliceChart {
  const GroupModel& g;
  std::vector<std::vector<double>> frame;
  std::vector<double> half_width;  // per chart coordinate, box is centered at 0

  SliceChart(const Gauge& gauge, const Direction& nu)
      : g(gauge.model()), frame(horizontal_frame(nu)) {
    if (static_cast<int>(nu.size()) != g.horizontal_dim()) {
      throw ConformanceError("direction must have dim V1 components");
    }
  }

  int dims() const { return g.dimension() - 1; }

  void embed(double t, std::span<const double> chart, std::span<double> out) const {
    const int m = g.horizontal_dim();
    for (int i = 0; i < m; ++i) out[i] = t * frame[0][i];
    for (int k = 1; k < m; ++k) {
      const double a = chart[k - 1];
      for (int i = 0; i < m; ++i) out[i] += a * frame[k][i];
    }
    for (int i = m; i < g.dimension(); ++i) out[i] = chart[i - 1];
  }
};

}  // namespace

Estimate slice_area(const Gauge& gauge, const Direction& nu, double t, std::int64_t n_samples,
                    std::uint64_t seed) {
  if (n_samples < 1000) throw DomainError("slice_area needs at least 1000 samples");
  if (!std::isfinite(t)) throw DomainError("slice offset must be finite");
  const SliceChart chart(gauge, nu);
  const GroupModel& g = gauge.model();
  const int m = g.horizontal_dim();
  const auto& bounds = gauge.layer_bounds();

  Estimate empty{0.0, 0.0, n_samples, seed};
  const double h = bounds[0];
  if (std::abs(t) >= h) return empty;
  const double h_perp = std::sqrt(h * h - t * t);

  std::vector<double> half(static_cast<std::size_t>(chart.dims()));
  double volume = 1.0;
  for (int k = 0; k < chart.dims(); ++k) {
    half[k] = k < m - 1 ? h_perp : bounds[static_cast<std::size_t>(g.weight(k + 1) - 1)];
    volume *= 2.0 * half[k];
  }
  if (!(volume > 0.0)) return empty;

  const std::int64_t batches = (n_samples + kBatch - 1) / kBatch;
  std::vector<std::int64_t> hits(static_cast<std::size_t>(batches), 0);
  parallel_for(static_cast<std::size_t>(batches), [&](std::size_t b) {
    Rng rng(seed, {0x511ceULL, b});
    std::vector<double> c(half.size()), p(static_cast<std::size_t>(g.dimension()));
    const std::int64_t begin = static_cast<std::int64_t>(b) * kBatch;
    const std::int64_t end = std::min(n_samples, begin + kBatch);
    std::int64_t count = 0;
    for (std::int64_t s = begin; s < end; ++s) {
      for (std::size_t k = 0; k < half.size(); ++k) c[k] = rng.uniform(-half[k], half[k]);
      chart.embed(t, c, p);
      count += gauge.in_unit_ball(p) ? 1 : 0;
    }
    hits[b] = count;
  });

  std::int64_t total = 0;
  for (std::int64_t h_b : hits) total += h_b;
  const double frac = static_cast<double>(total) / static_cast<double>(n_samples);
  return {volume * frac, volume * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n_samples)),
          n_samples, seed};
}

Estimate translated_slice_area(const Gauge& gauge, const Direction& nu, const Point& z,
                               std::int64_t n_samples, std::uint64_t seed) {
  if (n_samples < 1000) throw DomainError("translated_slice_area needs at least 1000 samples");
  const GroupModel& g = gauge.model();
  g.check_conforms(z.coords());
  g.check_exact();
  const SliceChart chart(gauge, nu);
  const int m = g.horizontal_dim();
  const auto& bounds = gauge.layer_bounds();

  // n = z w with w in B(0,1): |n1| <= |z1| + h and
  // |n2| <= |z2| + v + |[z1, w1]| / 2 <= |z2| + v + C |z1| h / 2.
  double bracket_bound = 0.0;
  for (const auto& e : g.bracket_entries()) bracket_bound += std::abs(e.coefficient);
  const double z1 = euclidean_norm(z.coords().first(static_cast<std::size_t>(m)));
  const double z2 = euclidean_norm(z.coords().subspan(static_cast<std::size_t>(m)));
  const double h = bounds[0] + z1;
  const double v = g.step() == 2 ? bounds[1] + z2 + 0.5 * bracket_bound * z1 * bounds[0] : 0.0;

  std::vector<double> half(static_cast<std::size_t>(chart.dims()));
  double volume = 1.0;
  for (int k = 0; k < chart.dims(); ++k) {
    half[k] = k < m - 1 ? h : v;
    volume *= 2.0 * half[k];
  }
  const Point z_inv = inverse(g, z);

  const std::int64_t batches = (n_samples + kBatch - 1) / kBatch;
  std::vector<std::int64_t> hits(static_cast<std::size_t>(batches), 0);
  parallel_for(static_cast<std::size_t>(batches), [&](std::size_t b) {
    Rng rng(seed, {0x7a45ULL, b});
    const std::size_t n = static_cast<std::size_t>(g.dimension());
    std::vector<double> c(half.size()), p(n), w(n);
    const std::int64_t begin = static_cast<std::int64_t>(b) * kBatch;
    const std::int64_t end = std::min(n_samples, begin + kBatch);
    std::int64_t count = 0;
    for (std::int64_t s = begin; s < end; ++s) {
      for (std::size_t k = 0; k < half.size(); ++k) c[k] = rng.uniform(-half[k], half[k]);
      chart.embed(0.0, c, p);
      g.multiply(z_inv.coords(), p, w);
      count += gauge.in_unit_ball(w) ? 1 : 0;
    }
    hits[b] = count;
  });
  std::int64_t total = 0;
  for (std::int64_t h_b : hits) total += h_b;
  const double frac = static_cast<double>(total) / static_cast<double>(n_samples);
  return {volume * frac, volume * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n_samples)),
          n_samples, seed};
}

double slice_support(const Gauge& gauge, const Direction& nu, std::uint64_t seed) {
  const SliceChart chart(gauge, nu);
  const GroupModel& g = gauge.model();
  const int m = g.horizontal_dim();
  const auto& bounds = gauge.layer_bounds();
  const double h = bounds[0];
  constexpr int kPilot = 4096;

  // A slice is non-empty when its horizontal point t nu lies in the ball or
  // when pilot samples on the slice hit it.
  int probe = 0;
  auto nonempty = [&](double t) {
    std::vector<double> c(static_cast<std::size_t>(chart.dims()), 0.0);
    std::vector<double> p(static_cast<std::size_t>(g.dimension()));
    chart.embed(t, c, p);
    if (gauge.in_unit_ball(p)) return true;
    if (std::abs(t) >= h) return false;
    const double h_perp = std::sqrt(h * h - t * t);
    Rng rng(seed, {0x5e7ULL, static_cast<std::uint64_t>(probe++)});
    for (int s = 0; s < kPilot; ++s) {
      for (int k = 0; k < chart.dims(); ++k) {
        const double b = k < m - 1 ? h_perp : bounds[static_cast<std::size_t>(g.weight(k + 1) - 1)];
        c[k] = rng.uniform(-b, b);
      }
      chart.embed(t, c, p);
      if (gauge.in_unit_ball(p)) return true;
    }
    return false;
  };

  if (nonempty(h)) return h;
  double lo = 0.0;
  double hi = h;
  while (hi - lo > 1e-12 * h) {
    const double mid = 0.5 * (lo + hi);
    (nonempty(mid) ? lo : hi) = mid;
  }
  return lo;
}

SliceProfile slice_profile(const Gauge& gauge, const Direction& nu, int grid_size,
                           std::int64_t samples_per_point, std::uint64_t seed) {
  if (grid_size < 5 || grid_size % 2 == 0) {
    throw DomainError("slice profile grid size must be odd and at least 5");
  }
  SliceProfile profile{nu, {}, {}, slice_support(gauge, nu, seed), seed};
  const double T = profile.support;
  const int half = grid_size / 2;
  profile.grid.resize(static_cast<std::size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) profile.grid[i] = T * static_cast<double>(i - half) / half;
  profile.grid[half] = 0.0;
  profile.areas.reserve(profile.grid.size());
  for (int i = 0; i < grid_size; ++i) {
    profile.areas.push_back(slice_area(gauge, nu, profile.grid[i], samples_per_point,
                                       derive_seed(seed, {0x9a1dULL, static_cast<std::uint64_t>(i)})));
  }
  return profile;
}

ConcavityReport concavity_report(const SliceProfile& profile, double exponent) {
  if (!(exponent > 0.0)) throw DomainError("concavity exponent must be positive");
  const std::size_t n = profile.grid.size();
  std::vector<double> g(n), se(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = profile.areas[i].value;
    g[i] = std::pow(a, exponent);
    // Delta method; an exactly empty slice carries no error.
    se[i] = a > 0.0 ? exponent * std::pow(a, exponent - 1.0) * profile.areas[i].std_error : 0.0;
  }
  ConcavityReport report;
  report.exponent = exponent;
  report.worst_margin = std::numeric_limits<double>::infinity();
  report.worst_sigma = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double margin = g[i] - 0.5 * (g[i - 1] + g[i + 1]);
    const double sigma = std::sqrt(se[i] * se[i] + 0.25 * (se[i - 1] * se[i - 1] + se[i + 1] * se[i + 1]));
    ++report.triples;
    if (margin < -3.0 * sigma) ++report.violations;
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.worst_t = profile.grid[i];
    }
    const double in_sigma = sigma > 0.0 ? margin / sigma : (margin < 0.0 ? -std::numeric_limits<double>::infinity() : 0.0);
    report.worst_sigma = std::min(report.worst_sigma, in_sigma);
  }
  if (report.triples == 0) report.worst_margin = report.worst_sigma = 0.0;
  return report;
}

double busemann_exponent(const GroupModel& model) {
  if (model.dimension() < 2) throw DomainError("slices need dimension >= 2");
  return 1.0 / (model.dimension() - 1);
}

}  // namespace carnot
