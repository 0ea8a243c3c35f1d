// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include "carnot/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "carnot/error.hpp"
#include "carnot/expression.hpp"
#include "carnot/parallel.hpp"
#include "carnot/random.hpp"

namespace carnot {

SurfaceSpec::SurfaceSpec(GroupModel model, ScalarField f, HorizontalGradient grad_h, Point base,
                         std::string name)
    : model_(std::move(model)),
      f_(std::move(f)),
      grad_h_(std::move(grad_h)),
      base_(std::move(base)),
      name_(std::move(name)) {
  model_.check_exact();
  model_.check_conforms(base_.coords());
  if (!f_) throw DomainError("surface needs a defining function");
  const double fx = f_(base_.coords());
  if (!(std::abs(fx) <= 1e-10)) {
    std::ostringstream msg;
    msg << "base point is not on the surface '" << name_ << "' (f = " << fx << ")";
    throw DomainError(msg.str());
  }
  const std::vector<double> grad = horizontal_gradient(base_);
  if (!(euclidean_norm(grad) >= kRegularityFloor)) {
    throw RegularityError("surface '" + name_ + "' is not G-regular at the base point");
  }
  normal_.emplace(grad);
  frame_ = horizontal_frame(*normal_);
}

SurfaceSpec SurfaceSpec::rebased(Point base) const {
  return SurfaceSpec(model_, f_, grad_h_, std::move(base), name_);
}

void SurfaceSpec::horizontal_gradient(std::span<const double> p, std::span<double> out) const {
  if (grad_h_) {
    grad_h_(p, out);
    return;
  }
  const int m = model_.horizontal_dim();
  const std::size_t n = static_cast<std::size_t>(model_.dimension());
  std::vector<double> q(n, 0.0), moved(n);
  auto along = [&](int j, double s) {
    q[static_cast<std::size_t>(j)] = s;
    model_.multiply(p, q, moved);
    q[static_cast<std::size_t>(j)] = 0.0;
    return f_(moved);
  };
  constexpr double h = 1e-5;
  for (int j = 0; j < m; ++j) {
    const double d1 = (along(j, h) - along(j, -h)) / (2.0 * h);
    const double d2 = (along(j, 0.5 * h) - along(j, -0.5 * h)) / h;
    out[j] = (4.0 * d2 - d1) / 3.0;
  }
}

std::vector<double> SurfaceSpec::horizontal_gradient(const Point& p) const {
  model_.check_conforms(p.coords());
  std::vector<double> out(static_cast<std::size_t>(model_.horizontal_dim()));
  horizontal_gradient(p.coords(), out);
  return out;
}

SurfaceSpec quadric_surface(GroupModel model, double c0, std::vector<double> a, std::vector<double> b,
                            std::vector<double> quadratic, Point base, std::string name) {
  model.check_exact();
  const std::size_t m = static_cast<std::size_t>(model.horizontal_dim());
  const std::size_t v = static_cast<std::size_t>(model.vertical_dim());
  if (a.empty()) a.assign(m, 0.0);
  if (b.empty()) b.assign(v, 0.0);
  if (a.size() != m || b.size() != v || !(quadratic.empty() || quadratic.size() == m * m)) {
    throw ConformanceError("quadric coefficients do not match the layer dimensions");
  }
  // Symmetrize so that grad (x^T A x / 2) = A x.
  if (!quadratic.empty()) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double s = 0.5 * (quadratic[i * m + j] + quadratic[j * m + i]);
        quadratic[i * m + j] = quadratic[j * m + i] = s;
      }
    }
  }
  auto coeffs = std::make_shared<const std::tuple<std::vector<double>, std::vector<double>, std::vector<double>>>(
      std::move(a), std::move(b), std::move(quadratic));
  auto f = [coeffs, c0, m, v](std::span<const double> p) {
    const auto& [ca, cb, cq] = *coeffs;
    double s = c0;
    for (std::size_t i = 0; i < m; ++i) s += ca[i] * p[i];
    for (std::size_t k = 0; k < v; ++k) s += cb[k] * p[m + k];
    if (!cq.empty()) {
      for (std::size_t i = 0; i < m; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m; ++j) row += cq[i * m + j] * p[j];
        s += 0.5 * p[i] * row;
      }
    }
    return s;
  };
  // X_j f(p) = a_j + (A p1)_j + <b, [p1, e_j]> / 2
  auto grad = [coeffs, model, m, v](std::span<const double> p, std::span<double> out) {
    const auto& [ca, cb, cq] = *coeffs;
    for (std::size_t j = 0; j < m; ++j) {
      double s = ca[j];
      if (!cq.empty()) {
        for (std::size_t i = 0; i < m; ++i) s += cq[j * m + i] * p[i];
      }
      for (std::size_t k = 0; k < v; ++k) {
        if (cb[k] == 0.0) continue;
        double br = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          br += p[i] * model.bracket(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k));
        }
        s += 0.5 * cb[k] * br;
      }
      out[j] = s;
    }
  };
  return SurfaceSpec(std::move(model), f, grad, std::move(base), std::move(name));
}

SurfaceSpec vertical_plane(GroupModel model, const Direction& nu, Point base) {
  const std::size_t m = static_cast<std::size_t>(model.horizontal_dim());
  if (nu.size() != m) throw ConformanceError("plane normal must lie in V1");
  model.check_conforms(base.coords());
  std::vector<double> a(nu.components().begin(), nu.components().end());
  const double c0 = -dot(a, base.coords().first(m));
  std::ostringstream name;
  name << "vplane:nu=";
  for (std::size_t i = 0; i < m; ++i) name << (i ? "," : "") << nu[i];
  return quadric_surface(std::move(model), c0, std::move(a), {}, {}, std::move(base), name.str());
}

SurfaceSpec coordinate_plane(GroupModel model, Point base) {
  if (model.step() != 2) throw UnsupportedModelError("tplane needs a step-2 model");
  model.check_conforms(base.coords());
  std::vector<double> b(static_cast<std::size_t>(model.vertical_dim()), 0.0);
  b[0] = 1.0;
  const double c0 = -base[static_cast<std::size_t>(model.horizontal_dim())];
  return quadric_surface(std::move(model), c0, {}, std::move(b), {}, std::move(base), "tplane");
}

SurfaceSpec expression_surface(GroupModel model, std::string_view expression, Point base) {
  auto expr = std::make_shared<const Expression>(Expression::parse(expression, model.dimension()));
  ScalarField f = [expr](std::span<const double> p) { return expr->evaluate(p); };
  return SurfaceSpec(std::move(model), std::move(f), {}, std::move(base), "expr:" + std::string(expression));
}

SurfaceSpec surface_from_spec(const GroupModel& model, std::string_view spec, const Point& base) {
  if (spec == "tplane") return coordinate_plane(model, base);
  if (spec.starts_with("expr:")) return expression_surface(model, spec.substr(5), base);
  if (spec == "vplane" || spec.starts_with("vplane:")) {
    std::vector<double> nu(static_cast<std::size_t>(model.horizontal_dim()), 0.0);
    nu[0] = 1.0;
    if (spec.starts_with("vplane:")) {
      std::string_view rest = spec.substr(7);
      if (!rest.starts_with("nu=")) throw ParseError("vplane: expected nu=a,b,...");
      rest.remove_prefix(3);
      nu.clear();
      std::istringstream in{std::string(rest)};
      std::string tok;
      while (std::getline(in, tok, ',')) {
        try {
          std::size_t used = 0;
          nu.push_back(std::stod(tok, &used));
          if (used != tok.size()) throw ParseError("");
        } catch (const std::exception&) {
          throw ParseError("vplane: bad component '" + tok + "'");
        }
      }
    }
    return vertical_plane(model, Direction(nu), base);
  }
  throw ParseError("unknown surface '" + std::string(spec) + "'");
}

Direction horizontal_normal(const SurfaceSpec& s, const Point& p) {
  std::vector<double> grad = s.horizontal_gradient(p);
  if (!(euclidean_norm(grad) >= kRegularityFloor)) {
    throw RegularityError("horizontal gradient vanishes; surface is not G-regular here");
  }
  return Direction(std::move(grad));
}

void embed_vertical(const SurfaceSpec& s, double t, std::span<const double> chart, std::span<double> out) {
  const GroupModel& g = s.model();
  const int m = g.horizontal_dim();
  const auto& frame = s.frame();
  for (int i = 0; i < m; ++i) out[i] = 0.0;
  for (int k = 1; k < m; ++k) {
    const double a = t * chart[k - 1];
    for (int i = 0; i < m; ++i) out[i] += a * frame[k][i];
  }
  const double t2 = t * t;
  for (int i = m; i < g.dimension(); ++i) out[i] = t2 * chart[i - 1];
}

namespace {

enum class HeightStatus { ok, outside, failure };

// Solves f(x n (sigma X_1)) = 0. For step 2 the curve sigma -> x n (sigma X_1)
// is affine: (xn_1 + sigma X_1, xn_2 + sigma [xn_1, X_1] / 2).
struct HeightSolver {
  const SurfaceSpec& s;
  std::vector<double> xn, slope, point, br;

  explicit HeightSolver(const SurfaceSpec& surface)
      : s(surface),
        xn(static_cast<std::size_t>(surface.model().dimension())),
        slope(xn.size(), 0.0),
        point(xn.size()),
        br(static_cast<std::size_t>(surface.model().vertical_dim())) {}

  HeightStatus solve(std::span<const double> n, double bracket, double& phi) {
    const GroupModel& g = s.model();
    const std::size_t m = static_cast<std::size_t>(g.horizontal_dim());
    g.multiply(s.base().coords(), n, xn);
    const auto& x1 = s.frame()[0];
    for (std::size_t i = 0; i < m; ++i) slope[i] = x1[i];
    g.bracket_vector(std::span<const double>(xn).first(m), x1, br);
    for (std::size_t k = 0; k < br.size(); ++k) slope[m + k] = 0.5 * br[k];

    auto at = [&](double sigma) {
      for (std::size_t i = 0; i < xn.size(); ++i) point[i] = xn[i] + sigma * slope[i];
      return s.value(point);
    };
    double lo = -bracket;
    double hi = bracket;
    const double g_lo = at(lo);
    const double g_hi = at(hi);
    if (!std::isfinite(g_lo) || !std::isfinite(g_hi) || g_lo > g_hi) return HeightStatus::failure;
    if (g_lo > 0.0 || g_hi < 0.0) return HeightStatus::outside;
    const double stop = 1e-15 * bracket;
    for (int it = 0; it < 200 && hi - lo > stop; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double gm = at(mid);
      if (!std::isfinite(gm)) return HeightStatus::failure;
      if (gm == 0.0) {
        lo = hi = mid;
        break;
      }
      (gm < 0.0 ? lo : hi) = mid;
    }
    phi = 0.5 * (lo + hi);
    return HeightStatus::ok;
  }

  // Phi = x n (phi X_1), written into `out`.
  void graph_point(double phi, std::span<double> out) const {
    for (std::size_t i = 0; i < xn.size(); ++i) out[i] = xn[i] + phi * slope[i];
  }
};

}  // namespace

double graph_height(const SurfaceSpec& s, const Point& n, double bracket) {
  s.model().check_conforms(n.coords());
  if (!(bracket > 0.0)) throw DomainError("graph_height bracket must be positive");
  HeightSolver solver(s);
  double phi = 0.0;
  switch (solver.solve(n.coords(), bracket, phi)) {
    case HeightStatus::ok:
      return phi;
    case HeightStatus::outside:
      throw BracketError("no sign change of f along X_1 within the bracket");
    case HeightStatus::failure:
      break;
  }
  throw BracketError("f is not increasing along X_1 on the bracket (point outside U)");
}

namespace {
constexpr std::int64_t kSampleBatch = 4096;
}  // namespace

PerimeterSampler::PerimeterSampler(const SurfaceSpec& s, const Gauge& gauge, double scale,
                                   const Point& center, double radius, std::int64_t n_samples,
                                   std::uint64_t seed)
    : gauge_(gauge), scale_(scale), center_(center), radius_(radius), seed_(seed) {
  const GroupModel& g = s.model();
  g.check_exact();
  if (gauge.model().dimension() != g.dimension()) throw ConformanceError("gauge and surface models differ");
  g.check_conforms(center.coords());
  if (!(scale > 0.0) || !(radius > 0.0)) throw DomainError("perimeter scale and radius must be positive");
  if (n_samples < 1000) throw DomainError("perimeter sampling needs at least 1000 samples");
  if (g.dimension() < 2) throw DomainError("hypersurfaces need dimension >= 2");

  const std::size_t n = static_cast<std::size_t>(g.dimension());
  const int m = g.horizontal_dim();
  const auto& bounds = gauge.layer_bounds();
  const double h = bounds[0];

  // Coverage ball B(center, radius) lies in B(x, reach). Any graph point with
  // |phi| > reach * h has |(x^{-1} Phi)_1| > reach * h and misses it.
  const double reach = gauge.norm(multiply(g, inverse(g, s.base()), center)) + radius;
  const double rescaled = reach / scale;
  const double bracket = 1.01 * reach * h;

  // Rigorous parameter box K0. With Phi = x n (phi X_1) and n_1 orthogonal
  // to X_1, x^{-1} Phi = (n_1 + phi X_1, n_2 + phi [n_1, X_1] / 2), so a hit
  // needs |n_1| <= reach h, |phi| <= reach h and
  // |n_2| <= reach^2 (bound_2 + C h^2 / 2), C the norm of the bracket.
  double c_sq = 0.0;
  for (int k = 0; k < g.vertical_dim(); ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) c_sq += 0.5 * g.bracket(i, j, k) * g.bracket(i, j, k);
  const double vertical_reach = bounds[1] + 0.5 * std::sqrt(c_sq) * h * h;
  const double horizontal_cap = rescaled * h;
  const double vertical_cap = rescaled * rescaled * vertical_reach;
  std::vector<double> half(n - 1);
  for (std::size_t k = 0; k < half.size(); ++k) {
    half[k] = static_cast<int>(k) < m - 1 ? horizontal_cap : vertical_cap;
  }
  const std::size_t m_chart = static_cast<std::size_t>(m - 1);
  auto ruled_out = [&](std::span<const double> chart) {
    double hs = 0.0, vs = 0.0;
    for (std::size_t k = 0; k < chart.size(); ++k) (k < m_chart ? hs : vs) += chart[k] * chart[k];
    return hs > horizontal_cap * horizontal_cap || vs > vertical_cap * vertical_cap;
  };

  const Point center_inv = inverse(g, center);
  const double inv_radius = 1.0 / radius;
  auto covered = [&](std::span<const double> phi_point, std::span<double> w, std::span<double> scaled) {
    g.multiply(center_inv.coords(), phi_point, w);
    g.dilate(inv_radius, w, scaled);
    return gauge_.in_unit_ball(scaled);
  };

  stats_.half_widths = half;
  stats_.box_volume = 1.0;
  for (double hw : half) stats_.box_volume *= 2.0 * hw;
  stats_.samples = n_samples;
  weight_ = std::pow(scale, g.homogeneous_dimension() - 1) * stats_.box_volume;

  struct Batch {
    std::vector<double> points, alpha;
    std::int64_t failures = 0;
  };
  const std::int64_t batches = (n_samples + kSampleBatch - 1) / kSampleBatch;
  std::vector<Batch> out(static_cast<std::size_t>(batches));
  parallel_for(static_cast<std::size_t>(batches), [&](std::size_t b) {
    Batch& batch = out[b];
    HeightSolver solver(s);
    Rng rng(seed, {0x5a3b1eULL, b});
    std::vector<double> chart(half.size()), eta(n), phi_point(n), w(n), scaled(n);
    std::vector<double> grad(static_cast<std::size_t>(m));
    const auto& x1 = s.frame()[0];
    const std::int64_t begin = static_cast<std::int64_t>(b) * kSampleBatch;
    const std::int64_t end = std::min(n_samples, begin + kSampleBatch);
    for (std::int64_t i = begin; i < end; ++i) {
      for (std::size_t k = 0; k < half.size(); ++k) chart[k] = rng.uniform(-half[k], half[k]);
      if (ruled_out(chart)) continue;
      embed_vertical(s, scale, chart, eta);
      double phi = 0.0;
      const HeightStatus status = solver.solve(eta, bracket, phi);
      if (status == HeightStatus::failure) {
        ++batch.failures;
        continue;
      }
      if (status == HeightStatus::outside) continue;
      solver.graph_point(phi, phi_point);
      if (!covered(phi_point, w, scaled)) continue;
      s.horizontal_gradient(phi_point, grad);
      const double x1f = dot(grad, x1);
      if (!(x1f > 0.0)) {
        ++batch.failures;
        continue;
      }
      batch.points.insert(batch.points.end(), phi_point.begin(), phi_point.end());
      batch.alpha.push_back(euclidean_norm(grad) / x1f);
    }
  });
  for (Batch& batch : out) {
    stats_.failures += batch.failures;
    points_.insert(points_.end(), batch.points.begin(), batch.points.end());
    alpha_.insert(alpha_.end(), batch.alpha.begin(), batch.alpha.end());
  }
  stats_.kept = static_cast<std::int64_t>(alpha_.size());
  if (static_cast<double>(stats_.failures) > 1e-3 * static_cast<double>(n_samples)) {
    throw RegionError("graph height failed on " + std::to_string(stats_.failures) + " of " +
                      std::to_string(n_samples) + " samples");
  }
}

Estimate PerimeterSampler::evaluate(const Point& y, double r) const {
  const GroupModel& g = gauge_.model();
  g.check_conforms(y.coords());
  if (!(r > 0.0)) throw DomainError("ball radius must be positive");
  const Point y_inv = inverse(g, y);
  const double offset = gauge_.norm(multiply(g, inverse(g, center_), y));
  if (offset + r > radius_ * (1.0 + 1e-9)) {
    throw DomainError("ball is not contained in the sampler's coverage ball");
  }
  const std::size_t n = static_cast<std::size_t>(g.dimension());
  const std::size_t count = alpha_.size();
  constexpr std::size_t kChunk = 16384;
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<double> sum(chunks, 0.0), sum_sq(chunks, 0.0);
  const double inv_r = 1.0 / r;
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<double> w(n), scaled(n);
    const std::size_t end = std::min(count, (c + 1) * kChunk);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = c * kChunk; i < end; ++i) {
      g.multiply(y_inv.coords(), std::span<const double>(points_).subspan(i * n, n), w);
      g.dilate(inv_r, w, scaled);
      if (gauge_.in_unit_ball(scaled)) {
        s1 += alpha_[i];
        s2 += alpha_[i] * alpha_[i];
      }
    }
    sum[c] = s1;
    sum_sq[c] = s2;
  });
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    s1 += sum[c];
    s2 += sum_sq[c];
  }
  const double N = static_cast<double>(stats_.samples);
  const double mean = s1 / N;
  const double var = std::max(0.0, s2 / N - mean * mean);
  return {weight_ * mean, weight_ * std::sqrt(var / N), stats_.samples, seed_};
}

PerimeterEstimate perimeter_ball(const SurfaceSpec& s, const Gauge& gauge, const Point& y, double t,
                                 std::int64_t n_samples, std::uint64_t seed) {
  const PerimeterSampler sampler(s, gauge, t, y, t, n_samples, seed);
  return {y, t, sampler.evaluate(y, t)};
}

}  // namespace carnot
