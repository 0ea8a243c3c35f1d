// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include "carnot/gauge.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "carnot/error.hpp"
#include "carnot/parallel.hpp"
#include "carnot/random.hpp"

namespace carnot {

namespace {

double layer_norm(const GroupModel& g, std::span<const double> p, int layer) {
  const int begin = g.layer_offset(layer);
  return euclidean_norm(p.subspan(begin, g.layer_dims()[layer]));
}

double parse_number(std::string_view s, std::string_view what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw ParseError(std::string(what) + ": expected a number, got '" + std::string(s) + "'");
  }
  return value;
}

// "key=v,key=v" -> map; rejects malformed pairs.
std::map<std::string, double> parse_params(std::string_view text, std::string_view gauge) {
  std::map<std::string, double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(std::string(gauge) + ": expected key=value, got '" + std::string(item) + "'");
    }
    std::string key(item.substr(0, eq));
    if (out.count(key)) throw ParseError(std::string(gauge) + ": duplicate parameter '" + key + "'");
    out[key] = parse_number(item.substr(eq + 1), key);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void reject_unknown(const std::map<std::string, double>& params,
                    std::initializer_list<std::string_view> allowed, std::string_view gauge) {
  for (const auto& [key, value] : params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError(std::string(gauge) + ": unknown parameter '" + key + "'");
    }
  }
}

}  // namespace

Gauge Gauge::koranyi(GroupModel model) {
  model.check_exact();
  Gauge g;
  g.kind_ = GaugeKind::koranyi;
  g.flags_ = {true, true};
  g.name_ = "koranyi";
  g.layer_bounds_ = {1.0};
  if (model.step() == 2) g.layer_bounds_.push_back(0.25);
  g.r0_ = 1.0;
  g.model_ = std::make_shared<const GroupModel>(std::move(model));
  return g;
}

Gauge Gauge::d_infty(GroupModel model, std::vector<double> eps) {
  if (static_cast<int>(eps.size()) != model.step()) {
    throw DomainError("d_infty needs one constant per layer (" + std::to_string(model.step()) + ")");
  }
  if (eps[0] != 1.0) throw DomainError("d_infty requires eps_1 = 1");
  for (double e : eps) {
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("d_infty constants must be positive");
  }
  Gauge g;
  g.kind_ = GaugeKind::d_infty;
  g.flags_ = {true, true};
  std::ostringstream name;
  name << "dinf";
  for (std::size_t j = 1; j < eps.size(); ++j) name << (j == 1 ? ":" : ",") << "eps" << j + 1 << "=" << eps[j];
  g.name_ = name.str();
  for (std::size_t j = 0; j < eps.size(); ++j) {
    g.layer_bounds_.push_back(std::pow(1.0 / eps[j], static_cast<double>(j + 1)));
  }
  g.eps_ = std::move(eps);
  g.r0_ = 1.0;
  g.model_ = std::make_shared<const GroupModel>(std::move(model));
  return g;
}

Gauge Gauge::star_body(GroupModel model, StarBody body, GaugeFlags flags, std::string name) {
  if (!body.contains) throw GaugeDefinitionError("star body needs a membership oracle");
  if (static_cast<int>(body.layer_bounds.size()) != model.step()) {
    throw GaugeDefinitionError("star body needs one Euclidean bound per layer");
  }
  for (double b : body.layer_bounds) {
    if (!(b > 0.0) || !std::isfinite(b)) throw GaugeDefinitionError("layer bounds must be positive");
  }
  if (!(body.tolerance > 0.0 && body.tolerance < 1e-3)) {
    throw GaugeDefinitionError("star body tolerance must lie in (0, 1e-3)");
  }
  const std::vector<double> origin(static_cast<std::size_t>(model.dimension()), 0.0);
  if (!body.contains(origin)) throw GaugeDefinitionError("star body must contain the identity");

  Gauge g;
  g.kind_ = GaugeKind::star_body;
  g.flags_ = flags;
  g.name_ = std::move(name);
  g.layer_bounds_ = body.layer_bounds;
  g.body_ = std::move(body);
  g.model_ = std::make_shared<const GroupModel>(std::move(model));
  std::vector<double> e1(origin.size(), 0.0);
  e1[0] = 1.0;
  g.r0_ = 1.0 / g.norm(e1);
  return g;
}

Gauge Gauge::star_ball(GroupModel model, double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("starball radius must be positive");
  const double rho2 = rho * rho;
  StarBody body{[rho2](std::span<const double> p) { return dot(p, p) <= rho2; },
                std::vector<double>(static_cast<std::size_t>(model.step()), rho), 1e-10};
  std::ostringstream name;
  name << "starball:rho=" << rho;
  return star_body(std::move(model), std::move(body), {true, true}, name.str());
}

Gauge Gauge::two_ball(GroupModel model, double radius, double offset, int axis) {
  if (!(radius > 0.0) || !(offset >= 0.0) || !(offset < radius)) {
    throw DomainError("twoball needs 0 <= offset < radius so the body contains the identity");
  }
  if (axis < 0 || axis >= model.dimension()) throw DomainError("twoball axis out of range");
  const double r2 = radius * radius;
  StarBody body{[=](std::span<const double> p) {
                  double base = 0.0;
                  for (std::size_t i = 0; i < p.size(); ++i) {
                    if (static_cast<int>(i) != axis) base += p[i] * p[i];
                  }
                  const double a = p[axis];
                  return base + (a - offset) * (a - offset) <= r2 ||
                         base + (a + offset) * (a + offset) <= r2;
                },
                std::vector<double>(static_cast<std::size_t>(model.step()), radius), 1e-10};
  body.layer_bounds[static_cast<std::size_t>(model.weight(axis) - 1)] = radius + offset;
  std::ostringstream name;
  name << "twoball:r=" << radius << ",c=" << offset;
  if (axis != 0) name << ",axis=" << axis + 1;
  return star_body(std::move(model), std::move(body), {offset == 0.0, false}, name.str());
}

Gauge Gauge::anisotropic(GroupModel model) {
  model.check_exact();
  const int m = model.horizontal_dim();
  StarBody body{[m](std::span<const double> p) {
                  double l1 = 0.0;
                  for (int i = 0; i < m; ++i) l1 += std::abs(p[i]);
                  double v2 = 0.0;
                  for (std::size_t i = static_cast<std::size_t>(m); i < p.size(); ++i) v2 += p[i] * p[i];
                  return l1 * l1 * l1 * l1 + 16.0 * v2 <= 1.0;
                },
                {1.0}, 1e-10};
  if (model.step() == 2) body.layer_bounds.push_back(0.25);
  return star_body(std::move(model), std::move(body), {true, false}, "aniso");
}

Gauge Gauge::from_spec(GroupModel model, std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  const auto params = parse_params(rest, kind);
  if (kind == "koranyi") {
    reject_unknown(params, {}, kind);
    return koranyi(std::move(model));
  }
  if (kind == "aniso") {
    reject_unknown(params, {}, kind);
    return anisotropic(std::move(model));
  }
  if (kind == "dinf") {
    std::vector<double> eps(static_cast<std::size_t>(model.step()), 1.0);
    for (const auto& [key, value] : params) {
      int layer = 0;
      if (key.rfind("eps", 0) != 0 || std::from_chars(key.data() + 3, key.data() + key.size(), layer).ec != std::errc()) {
        throw ParseError("dinf: unknown parameter '" + key + "'");
      }
      if (layer < 2 || layer > model.step()) {
        throw ParseError("dinf: parameter '" + key + "' does not match a layer of the model");
      }
      eps[static_cast<std::size_t>(layer - 1)] = value;
    }
    return d_infty(std::move(model), std::move(eps));
  }
  if (kind == "starball") {
    reject_unknown(params, {"rho"}, kind);
    if (!params.count("rho")) throw ParseError("starball: missing rho");
    return star_ball(std::move(model), params.at("rho"));
  }
  if (kind == "twoball") {
    reject_unknown(params, {"r", "c", "axis"}, kind);
    const double r = params.count("r") ? params.at("r") : 0.5;
    const double c = params.count("c") ? params.at("c") : 0.3;
    const int axis = params.count("axis") ? static_cast<int>(params.at("axis")) - 1 : 0;
    return two_ball(std::move(model), r, c, axis);
  }
  throw ParseError("unknown gauge '" + std::string(spec) + "'");
}

double Gauge::norm(std::span<const double> p) const {
  const GroupModel& g = *model_;
  g.check_conforms(p);
  switch (kind_) {
    case GaugeKind::koranyi: {
      const double h = layer_norm(g, p, 0);
      const double v = g.step() == 2 ? layer_norm(g, p, 1) : 0.0;
      return std::sqrt(std::sqrt(h * h * h * h + 16.0 * v * v));
    }
    case GaugeKind::d_infty: {
      double best = 0.0;
      for (int j = 0; j < g.step(); ++j) {
        const double x = layer_norm(g, p, j);
        const double term = j == 0 ? x : eps_[j] * std::pow(x, 1.0 / (j + 1));
        best = std::max(best, term);
      }
      return best;
    }
    case GaugeKind::star_body:
      return star_norm(g, body_.contains, layer_bounds_, p, body_.tolerance);
  }
  return 0.0;
}

bool Gauge::in_unit_ball(std::span<const double> p) const {
  const GroupModel& g = *model_;
  switch (kind_) {
    case GaugeKind::koranyi: {
      const int m = g.horizontal_dim();
      double h2 = 0.0;
      for (int i = 0; i < m; ++i) h2 += p[i] * p[i];
      double v2 = 0.0;
      for (int i = m; i < g.dimension(); ++i) v2 += p[i] * p[i];
      return h2 * h2 + 16.0 * v2 <= 1.0;
    }
    case GaugeKind::d_infty: {
      for (int j = 0; j < g.step(); ++j) {
        if (layer_norm(g, p, j) > layer_bounds_[j]) return false;
      }
      return true;
    }
    case GaugeKind::star_body:
      return body_.contains(p);
  }
  return false;
}

bool Gauge::in_ball(std::span<const double> p, double radius) const {
  if (!(radius > 0.0)) return false;
  if (radius == 1.0) return in_unit_ball(p);
  std::vector<double> scaled(p.size());
  model_->dilate(1.0 / radius, p, scaled);
  return in_unit_ball(scaled);
}

double distance(const Gauge& gauge, const Point& p, const Point& q) {
  return gauge.norm(multiply(gauge.model(), inverse(gauge.model(), p), q));
}

double star_norm(const GroupModel& model, const BodyOracle& oracle,
                 std::span<const double> layer_bounds, std::span<const double> p, double tol) {
  model.check_conforms(p);
  if (!(tol > 0.0)) throw DomainError("star_norm tolerance must be positive");
  // Any r with delta_{1/r} p in the body satisfies |p_j| / r^j <= bound_j.
  double lower = 0.0;
  for (int j = 0; j < model.step(); ++j) {
    const double x = euclidean_norm(p.subspan(model.layer_offset(j), model.layer_dims()[j]));
    lower = std::max(lower, std::pow(x / layer_bounds[j], 1.0 / (j + 1)));
  }
  if (lower == 0.0) return 0.0;

  std::vector<double> scratch(p.size());
  auto inside = [&](double r) {
    model.dilate(1.0 / r, p, scratch);
    return oracle(scratch);
  };

  double lo = lower;
  if (inside(lo)) return lo;
  double hi = 2.0 * lo;
  int expansions = 0;
  while (!inside(hi)) {
    hi *= 2.0;
    if (++expansions > 200) {
      throw GaugeDefinitionError("star body: no boundary crossing along the dilation ray");
    }
  }
  lo = hi / 2.0 > lo ? hi / 2.0 : lo;
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? hi : lo) = mid;
  }
  if (!inside(1.5 * hi) || !inside(4.0 * hi) || inside(0.5 * lo)) {
    throw GaugeDefinitionError("star body: membership is not monotone along the dilation ray");
  }
  return 0.5 * (lo + hi);
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.violations == 0; });
}

std::int64_t ValidationReport::violations(std::string_view check) const {
  for (const auto& c : checks) {
    if (c.name == check) return c.violations;
  }
  return 0;
}

bool sample_unit_ball(const Gauge& gauge, Rng& rng, std::span<double> out, int max_tries) {
  const GroupModel& g = gauge.model();
  const auto& bounds = gauge.layer_bounds();
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    for (int i = 0; i < g.dimension(); ++i) {
      const double b = bounds[static_cast<std::size_t>(g.weight(i) - 1)];
      out[i] = rng.uniform(-b, b);
    }
    if (gauge.in_unit_ball(out)) return true;
  }
  return false;
}

namespace {

constexpr std::int64_t kChunk = 2048;

struct ChunkOutcome {
  std::array<ValidationCheck, 3> checks;
  double worst_triangle = 0.0;
  std::vector<double> wp, wq;
  double worst_any = 0.0;
  std::string worst_name;
};

}  // namespace

ValidationReport validate(const Gauge& gauge, std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("validate needs at least one sample");
  const GroupModel& g = gauge.model();
  g.check_exact();
  const std::size_t n = static_cast<std::size_t>(g.dimension());
  const std::int64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<ChunkOutcome> outcomes(static_cast<std::size_t>(chunks));

  // Slack for star bodies follows the bisection tolerance on each norm.
  const double rel = gauge.closed_form() ? 1e-12 : 4.0 * gauge.tolerance();

  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    ChunkOutcome& out = outcomes[c];
    out.checks = {ValidationCheck{"homogeneity"}, ValidationCheck{"symmetry"}, ValidationCheck{"triangle"}};
    Rng rng(seed, {0x7a11da7eULL, c});
    std::vector<double> unit(n), p(n), q(n), pq(n), tmp(n);
    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t end = std::min(samples, begin + kChunk);
    auto record = [&](ValidationCheck& check, double excess, double scale) {
      ++check.trials;
      const double slack = rel * std::max(1.0, scale);
      check.worst_violation = std::max(check.worst_violation, std::max(0.0, excess));
      if (excess > slack) {
        ++check.violations;
        if (excess > out.worst_any) {
          out.worst_any = excess;
          out.worst_name = check.name;
        }
      }
    };
    for (std::int64_t s = begin; s < end; ++s) {
      sample_unit_ball(gauge, rng, unit);
      g.dilate(4.0 * (1.0 - rng.uniform()), unit, p);
      sample_unit_ball(gauge, rng, unit);
      g.dilate(4.0 * (1.0 - rng.uniform()), unit, q);

      const double np = gauge.norm(p);
      const double nq = gauge.norm(q);

      const double r = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
      g.dilate(r, p, tmp);
      record(out.checks[0], std::abs(gauge.norm(tmp) - r * np), r * np);

      for (std::size_t i = 0; i < n; ++i) tmp[i] = -p[i];
      record(out.checks[1], std::abs(gauge.norm(tmp) - np), np);

      g.multiply(p, q, pq);
      const double excess = gauge.norm(pq) - np - nq;
      record(out.checks[2], excess, np + nq);
      if (excess > rel * std::max(1.0, np + nq) && excess > out.worst_triangle) {
        out.worst_triangle = excess;
        out.wp = p;
        out.wq = q;
      }
    }
  });

  ValidationReport report;
  report.gauge = gauge.name();
  report.samples = samples;
  report.seed = seed;
  report.checks = {ValidationCheck{"homogeneity"}, ValidationCheck{"symmetry"}, ValidationCheck{"triangle"}};
  double worst_triangle = 0.0;
  for (const ChunkOutcome& out : outcomes) {
    for (std::size_t k = 0; k < 3; ++k) {
      report.checks[k].trials += out.checks[k].trials;
      report.checks[k].violations += out.checks[k].violations;
      report.checks[k].worst_violation =
          std::max(report.checks[k].worst_violation, out.checks[k].worst_violation);
    }
    if (out.worst_any > report.worst_violation) {
      report.worst_violation = out.worst_any;
      report.worst_check = out.worst_name;
    }
    if (out.worst_triangle > worst_triangle) {
      worst_triangle = out.worst_triangle;
      report.witness = std::make_pair(Point(out.wp), Point(out.wq));
    }
  }
  return report;
}

CalibrationResult calibrate_dinfty(const GroupModel& model, std::vector<double> grid,
                                   std::int64_t samples, std::uint64_t seed) {
  if (model.step() > 2) throw UnsupportedModelError("d_infty calibration is limited to step <= 2");
  if (grid.empty()) throw CalibrationError("calibration grid is empty");
  std::sort(grid.begin(), grid.end(), std::greater<>());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  CalibrationResult result;
  result.group = model.name();
  result.samples = samples;
  result.seed = seed;
  bool found = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double eps2 = grid[i];
    if (!(eps2 > 0.0)) throw CalibrationError("calibration candidates must be positive");
    std::vector<double> eps{1.0};
    if (model.step() == 2) eps.push_back(eps2);
    const ValidationReport report = validate(Gauge::d_infty(model, eps), samples, derive_seed(seed, {i}));
    result.candidates.push_back({eps2, report.passed(), report.worst_violation});
    if (report.passed() && !found) {
      result.eps2 = eps2;
      found = true;
    }
  }
  if (!found) throw CalibrationError("no eps2 candidate passed the triangle-inequality sampler");
  return result;
}

ConvexityResult midpoint_convexity(const Gauge& gauge, std::int64_t samples, std::uint64_t seed,
                                   double slack) {
  const GroupModel& g = gauge.model();
  const std::size_t n = static_cast<std::size_t>(g.dimension());
  const std::int64_t chunks = (samples + kChunk - 1) / kChunk;
  struct Outcome {
    std::int64_t trials = 0, violations = 0;
    std::vector<double> wp, wq;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(chunks));
  const double shrink = 1.0 / (1.0 + slack);
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    Outcome& out = outcomes[c];
    Rng rng(seed, {0xc0417e8ULL, c});
    std::vector<double> p(n), q(n), mid(n), scaled(n);
    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t end = std::min(samples, begin + kChunk);
    for (std::int64_t s = begin; s < end; ++s) {
      sample_unit_ball(gauge, rng, p);
      sample_unit_ball(gauge, rng, q);
      for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (p[i] + q[i]);
      g.dilate(shrink, mid, scaled);
      ++out.trials;
      if (!gauge.in_unit_ball(scaled)) {
        if (out.violations++ == 0) {
          out.wp = p;
          out.wq = q;
        }
      }
    }
  });
  ConvexityResult result;
  for (const Outcome& out : outcomes) {
    result.trials += out.trials;
    result.violations += out.violations;
    if (!result.witness && out.violations > 0) result.witness = std::make_pair(Point(out.wp), Point(out.wq));
  }
  return result;
}

}  // namespace carnot
