// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include "carnot/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "carnot/error.hpp"
#include "carnot/random.hpp"
#include "carnot/slice.hpp"

namespace carnot {

Check& VerificationReport::add(Check c) {
  if (!hypothesis_met && c.name.rfind("hypothesis:", 0) != 0) c.informational = true;
  checks.push_back(std::move(c));
  return checks.back();
}

const Check* VerificationReport::find(const std::string& name) const {
  for (const Check& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void VerificationReport::finalize() {
  pass = true;
  for (const Check& c : checks)
    if (!c.informational && !c.pass) pass = false;
}

namespace {

std::string format_point(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

Check count_check(std::string name, std::int64_t violations, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.target = 0.0;
  c.observed = static_cast<double>(violations);
  c.tolerance = 0.0;
  c.pass = violations == 0;
  c.detail = std::move(detail);
  return c;
}

// Apply R to the horizontal block of p.
void rotate_horizontal(const Rotation& R, int m, std::span<const double> p, std::span<double> out) {
  std::copy(p.begin(), p.end(), out.begin());
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += R[i * m + j] * p[j];
    out[i] = s;
  }
}

double norm_slack(const Gauge& gauge, double scale) {
  return gauge.closed_form() ? 1e-9 : 4.0 * gauge.tolerance() * std::max(1.0, scale);
}

}  // namespace

VerificationReport convexity_check(const Gauge& gauge, std::int64_t samples, std::uint64_t seed) {
  VerificationReport rep;
  rep.suite = "convexity";
  rep.gauge = gauge.name();
  rep.seed = seed;
  const ConvexityResult r = midpoint_convexity(gauge, samples, seed);
  std::string detail;
  if (r.witness) detail = "p=" + format_point(r.witness->first) + " q=" + format_point(r.witness->second);
  rep.add(count_check("midpoint_violations", r.violations, detail));
  rep.values["trials"] = static_cast<double>(r.trials);
  rep.finalize();
  return rep;
}

Rotation random_rotation(int m, std::uint64_t seed, std::uint64_t index) {
  Rng rng(seed, {0x707a, index});
  Rotation R(static_cast<std::size_t>(m) * m);
  for (;;) {
    for (double& v : R) v = rng.normal();
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
      for (int k = 0; k < i; ++k) {
        double d = 0.0;
        for (int j = 0; j < m; ++j) d += R[i * m + j] * R[k * m + j];
        for (int j = 0; j < m; ++j) R[i * m + j] -= d * R[k * m + j];
      }
      double n = 0.0;
      for (int j = 0; j < m; ++j) n += R[i * m + j] * R[i * m + j];
      n = std::sqrt(n);
      if (n < 1e-8) {
        ok = false;
        break;
      }
      for (int j = 0; j < m; ++j) R[i * m + j] /= n;
    }
    if (ok) return R;
  }
}

VerificationReport symmetry_check(const Gauge& gauge, const std::vector<Rotation>& rotations,
                                  std::int64_t samples, std::uint64_t seed) {
  const GroupModel& g = gauge.model();
  const int m = g.horizontal_dim();
  const std::size_t n = static_cast<std::size_t>(g.dimension());
  if (samples < 1) throw DomainError("symmetry_check: samples must be positive");

  std::vector<Rotation> family = rotations;
  if (family.empty()) {
    for (std::uint64_t i = 0; i < 64; ++i) family.push_back(random_rotation(m, seed, i));
  }
  for (const Rotation& R : family)
    if (R.size() != static_cast<std::size_t>(m) * m)
      throw DomainError("symmetry_check: rotation has wrong size");

  VerificationReport rep;
  rep.suite = "symmetry";
  rep.gauge = gauge.name();
  rep.seed = seed;

  // Condition (2): norm invariance under the family.
  {
    Rng rng(seed, {0x5e02});
    std::vector<double> x(n), y(n);
    std::int64_t violations = 0;
    double worst = 0.0, worst_tol = 0.0;
    std::string witness;
    for (std::int64_t s = 0; s < samples; ++s) {
      if (!sample_unit_ball(gauge, rng, x)) throw GaugeDefinitionError("symmetry_check: ball sampling failed");
      const Point xs = dilate(g, rng.uniform(0.05, 2.0), Point(x));
      const Rotation& R = family[static_cast<std::size_t>(s) % family.size()];
      rotate_horizontal(R, m, xs.coords(), y);
      const double a = gauge.norm(xs.coords());
      const double b = gauge.norm(std::span<const double>(y));
      const double tol = norm_slack(gauge, a);
      const double diff = std::abs(a - b);
      if (diff > tol) {
        ++violations;
        if (witness.empty())
          witness = "x=" + format_point(xs) + " Rx=" + format_point(Point(y)) + " |x|=" + std::to_string(a) +
                    " |Rx|=" + std::to_string(b);
      }
      if (diff > worst) {
        worst = diff;
        worst_tol = tol;
      }
    }
    Check c = count_check("rotation_invariance", violations, witness);
    rep.add(std::move(c));
    rep.values["rotation_max_deviation"] = worst;
    rep.values["rotation_tolerance"] = worst_tol;
    rep.values["rotations"] = static_cast<double>(family.size());
  }

  // Condition (1): the horizontal trace is a disc of radius r0 and contains
  // the horizontal projection of the ball.
  std::vector<std::vector<double>> dirs;
  for (int i = 0; i < m; ++i) {
    std::vector<double> e(m, 0.0);
    e[i] = 1.0;
    dirs.push_back(e);
    e[i] = -1.0;
    dirs.push_back(e);
  }
  for (std::uint64_t i = 0; i < 64; ++i) {
    const Direction d = random_direction(g, seed, 0xd100 + i);
    dirs.emplace_back(d.components().begin(), d.components().end());
  }
  double r_min = std::numeric_limits<double>::infinity(), r_max = 0.0, r_sum = 0.0;
  {
    std::vector<double> p(n, 0.0);
    for (const auto& u : dirs) {
      std::fill(p.begin(), p.end(), 0.0);
      std::copy(u.begin(), u.end(), p.begin());
      const double r = 1.0 / gauge.norm(std::span<const double>(p));
      r_min = std::min(r_min, r);
      r_max = std::max(r_max, r);
      r_sum += r;
    }
  }
  const double r0 = r_sum / static_cast<double>(dirs.size());
  const double rel_tol = gauge.closed_form() ? 1e-9 : 8.0 * gauge.tolerance();
  {
    Check c;
    c.name = "trace_is_disc";
    c.target = 0.0;
    c.observed = (r_max - r_min) / r0;
    c.tolerance = rel_tol;
    c.pass = c.observed <= rel_tol;
    std::ostringstream os;
    os.precision(17);
    os << "trace radius range [" << r_min << ", " << r_max << "]";
    c.detail = os.str();
    rep.add(std::move(c));
  }
  {
    Rng rng(seed, {0x9e07});
    std::vector<double> x(n);
    double max_proj = 0.0;
    std::int64_t violations = 0;
    std::string witness;
    for (std::int64_t s = 0; s < samples; ++s) {
      if (!sample_unit_ball(gauge, rng, x)) throw GaugeDefinitionError("symmetry_check: ball sampling failed");
      const double h = euclidean_norm(std::span<const double>(x.data(), static_cast<std::size_t>(m)));
      max_proj = std::max(max_proj, h);
      if (h > r0 * (1.0 + rel_tol)) {
        ++violations;
        if (witness.empty()) witness = "p=" + format_point(Point(x));
      }
    }
    rep.add(count_check("projection_within_trace", violations, witness));
    rep.values["max_sampled_projection"] = max_proj;
  }
  {
    // Points just outside the trace disc, at any height, must lie outside.
    Rng rng(seed, {0x5ca7});
    std::vector<double> p(n);
    const auto& bounds = gauge.layer_bounds();
    std::int64_t inside = 0;
    std::string witness;
    const int per_dir = 64;
    for (const auto& u : dirs) {
      for (int k = 0; k < per_dir; ++k) {
        for (int i = 0; i < m; ++i) p[i] = r0 * (1.0 + 1e-6) * u[i];
        for (std::size_t j = static_cast<std::size_t>(m); j < n; ++j) {
          const int layer = g.weight(static_cast<int>(j)) - 1;
          const double b = bounds[static_cast<std::size_t>(layer)];
          p[j] = k == 0 ? 0.0 : rng.uniform(-b, b);
        }
        if (gauge.in_unit_ball(p)) {
          ++inside;
          if (witness.empty()) witness = "p=" + format_point(Point(p));
        }
      }
    }
    rep.add(count_check("projection_extremal_scan", inside, witness));
  }
  rep.values["r0"] = r0;
  rep.finalize();
  return rep;
}

VerificationReport busemann_suite(const Gauge& gauge, const Direction& nu, const BusemannOptions& opts) {
  VerificationReport rep;
  rep.suite = "busemann";
  rep.gauge = gauge.name();
  rep.seed = opts.seed;

  const ConvexityResult conv = midpoint_convexity(gauge, opts.convexity_samples, derive_seed(opts.seed, {0xc0e}));
  {
    Check c = count_check("hypothesis:ball_convex", conv.violations);
    if (conv.witness)
      c.detail = "p=" + format_point(conv.witness->first) + " q=" + format_point(conv.witness->second);
    c.informational = true;
    rep.add(std::move(c));
  }
  rep.hypothesis_met = conv.violations == 0;

  SliceProfile profile = slice_profile(gauge, nu, opts.grid_size, opts.samples, opts.seed);
  const ConcavityReport cr = concavity_report(profile, busemann_exponent(gauge.model()));
  {
    Check c = count_check("concavity_violations", cr.violations);
    std::ostringstream os;
    os.precision(17);
    os << "exponent " << cr.exponent << ", triples " << cr.triples << ", worst margin " << cr.worst_margin
       << " (" << cr.worst_sigma << " sigma) at t=" << cr.worst_t;
    c.detail = os.str();
    rep.add(std::move(c));
  }
  rep.values["concavity_worst_sigma"] = cr.worst_sigma;

  const std::size_t ci = profile.center_index();
  std::size_t best = ci;
  for (std::size_t i = 0; i < profile.areas.size(); ++i)
    if (profile.areas[i].value > profile.areas[best].value) best = i;
  {
    const Estimate& c0 = profile.areas[ci];
    const Estimate& cb = profile.areas[best];
    Check c;
    c.name = "argmax_at_center";
    c.target = 0.0;
    c.observed = cb.value - c0.value;
    c.tolerance = 3.0 * joint_stderr(c0, cb);
    c.pass = c.observed <= c.tolerance;
    c.detail = "grid argmax t=" + std::to_string(profile.grid[best]);
    rep.add(std::move(c));
  }

  BetaOptions bo;
  bo.samples = opts.samples;
  bo.grid_size = opts.grid_size;
  bo.seed = opts.seed;
  bo.force_grid = true;
  const BetaResult b = refine_beta(gauge, profile, bo);
  const Estimate psi0 = slice_area(gauge, nu, 0.0, opts.samples, derive_seed(opts.seed, {0x1b0}));
  {
    Check c;
    c.name = "beta_equals_central_slice";
    c.target = psi0.value;
    c.observed = b.value.value;
    c.tolerance = 3.0 * joint_stderr(b.value, psi0);
    c.pass = std::abs(c.observed - c.target) <= c.tolerance;
    c.detail = "refined argmax t=" + std::to_string(b.argmax_t);
    rep.add(std::move(c));
  }
  rep.values["beta"] = b.value.value;
  rep.values["beta_stderr"] = b.value.std_error;
  rep.values["psi0"] = psi0.value;
  rep.values["psi0_stderr"] = psi0.std_error;
  rep.values["argmax_t"] = b.argmax_t;
  rep.finalize();
  return rep;
}

VerificationReport constancy_suite(const Gauge& gauge, int n_directions, const BetaOptions& opts,
                                   std::uint64_t seed) {
  VerificationReport rep;
  rep.suite = "constancy";
  rep.gauge = gauge.name();
  rep.seed = seed;

  const VerificationReport sym = symmetry_check(gauge, {}, 20000, derive_seed(seed, {0x5e11}));
  {
    Check c = count_check("hypothesis:v1_symmetric", sym.pass ? 0 : 1);
    c.informational = true;
    for (const Check& s : sym.checks)
      if (!s.pass) c.detail += (c.detail.empty() ? "" : "; ") + s.name + ": " + s.detail;
    rep.add(std::move(c));
  }
  rep.hypothesis_met = sym.pass;

  const ConstancyReport cr = beta_constancy(gauge, n_directions, opts, seed);
  {
    Check c;
    c.name = "pairwise_agreement";
    c.target = 0.0;
    c.observed = cr.max_deviation_sigma;
    c.tolerance = 3.0;
    c.pass = cr.constant;
    c.detail = "max |b_i - b_j| = " + std::to_string(cr.max_deviation);
    rep.add(std::move(c));
  }
  double w = 0.0, ws = 0.0;
  for (std::size_t i = 0; i < cr.results.size(); ++i) {
    const Estimate& e = cr.results[i].value;
    rep.values["beta_" + std::to_string(i)] = e.value;
    const double wi = e.std_error > 0 ? 1.0 / (e.std_error * e.std_error) : 1.0;
    w += wi;
    ws += wi * e.value;
  }
  if (w > 0) {
    Estimate mean{ws / w, std::sqrt(1.0 / w), 0, seed};
    const SphericalConstants k = spherical_constants(mean, gauge.model().homogeneous_dimension());
    rep.values["beta_mean"] = mean.value;
    rep.values["beta_mean_stderr"] = mean.std_error;
    rep.values["omega"] = k.omega;
    rep.values["c_Q-1"] = k.c;
  }
  rep.finalize();
  return rep;
}

VerificationReport blowup_suite(const std::vector<SurfaceSpec>& surfaces, const Gauge& gauge,
                                const DensitySchedule& sched, const BlowupOptions& opts) {
  VerificationReport rep;
  rep.suite = "blowup";
  rep.gauge = gauge.name();
  rep.seed = sched.seed;

  const ConvexityResult conv =
      midpoint_convexity(gauge, opts.beta.convexity_samples, derive_seed(sched.seed, {0xc0e}));
  const bool convex = conv.violations == 0;
  rep.values["ball_convex"] = convex ? 1.0 : 0.0;

  std::vector<Estimate> betas;
  for (const SurfaceSpec& s : surfaces) {
    const DensityReport dr = federer_density(s, gauge, s.base(), sched);
    const BetaResult b = beta(gauge, s.base_normal(), opts.beta);
    betas.push_back(b.value);
    const Estimate& th = dr.extrapolated_theta;
    {
      Check c;
      c.name = "theta_equals_beta[" + s.name() + "]";
      c.target = b.value.value;
      c.observed = th.value;
      c.tolerance = std::max(opts.relative_tolerance * b.value.value, 3.0 * joint_stderr(th, b.value));
      c.pass = std::abs(c.observed - c.target) <= c.tolerance && !dr.records.empty();
      if (dr.truncated) c.detail = "schedule truncated: " + dr.truncation_reason;
      rep.add(std::move(c));
    }
    rep.values["theta:" + s.name()] = th.value;
    rep.values["theta_stderr:" + s.name()] = th.std_error;
    rep.values["beta:" + s.name()] = b.value.value;
    rep.values["beta_stderr:" + s.name()] = b.value.std_error;
    if (opts.check_centered && convex) {
      const Estimate& ce = dr.extrapolated_centered;
      Check c;
      c.name = "centered_coincides[" + s.name() + "]";
      c.target = th.value;
      c.observed = ce.value;
      c.tolerance = 3.0 * joint_stderr(th, ce);
      c.pass = std::abs(c.observed - c.target) <= c.tolerance;
      rep.add(std::move(c));
      rep.values["centered:" + s.name()] = ce.value;
    }
  }

  bool agree = !betas.empty();
  for (std::size_t i = 0; i < betas.size(); ++i)
    for (std::size_t j = i + 1; j < betas.size(); ++j) agree = agree && agree_within(betas[i], betas[j]);
  if (agree) {
    double w = 0.0, ws = 0.0;
    for (const Estimate& e : betas) {
      const double wi = e.std_error > 0 ? 1.0 / (e.std_error * e.std_error) : 1.0;
      w += wi;
      ws += wi * e.value;
    }
    const Estimate mean{ws / w, std::sqrt(1.0 / w), 0, sched.seed};
    const SphericalConstants k = spherical_constants(mean, gauge.model().homogeneous_dimension());
    rep.values["omega"] = k.omega;
    rep.values["omega_stderr"] = k.omega_stderr;
    rep.values["c_Q-1"] = k.c;
    rep.values["c_Q-1_stderr"] = k.c_stderr;
  }
  rep.finalize();
  return rep;
}

VerificationReport exactness_suite(const Gauge& gauge, const ExactnessOptions& opts) {
  const GroupModel& g = gauge.model();
  g.check_exact();
  const std::size_t n = static_cast<std::size_t>(g.dimension());
  const int m = g.horizontal_dim();
  VerificationReport rep;
  rep.suite = "exactness";
  rep.gauge = gauge.name();
  rep.seed = opts.seed;

  Rng rng(opts.seed, {0xe8ac});
  auto random_point = [&](double scale) {
    Point p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = rng.uniform(-scale, scale);
    return p;
  };
  auto max_abs_diff = [](const Point& a, const Point& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
  };

  struct Tally {
    std::int64_t violations = 0;
    double worst = 0.0;
    std::string witness;
    void record(double dev, double tol, const std::string& w) {
      worst = std::max(worst, dev);
      if (!(dev <= tol)) {
        ++violations;
        if (witness.empty()) witness = w;
      }
    }
  };
  Tally assoc, autom, splitc, orth, homog, inv, even;

  const auto& bounds = gauge.layer_bounds();
  for (int k = 0; k < opts.cases; ++k) {
    const Point p = random_point(2.0), q = random_point(2.0), w = random_point(2.0);
    assoc.record(max_abs_diff(multiply(g, multiply(g, p, q), w), multiply(g, p, multiply(g, q, w))), 1e-10,
                 "p=" + format_point(p));

    const double r = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    autom.record(max_abs_diff(dilate(g, r, multiply(g, p, q)), multiply(g, dilate(g, r, p), dilate(g, r, q))),
                 1e-10, "p=" + format_point(p) + " r=" + std::to_string(r));

    const Direction nu = random_direction(g, opts.seed, 0x5b11 + static_cast<std::uint64_t>(k));
    const Splitting sp = split(g, nu, p);
    splitc.record(max_abs_diff(multiply(g, horizontal_point(g, nu, sp.t), sp.n), p), 1e-10, "p=" + format_point(p));
    orth.record(std::abs(dot(sp.n.coords().subspan(0, static_cast<std::size_t>(m)), nu.components())), 1e-12,
                "p=" + format_point(p));

    const double np = gauge.norm(p);
    const double tol_h = gauge.closed_form() ? 1e-12 * std::max(1.0, r * np) : 4.0 * gauge.tolerance() * r * np;
    homog.record(std::abs(gauge.norm(dilate(g, r, p)) - r * np), tol_h, "p=" + format_point(p));

    Point b(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double lim = 1.2 * bounds[static_cast<std::size_t>(g.weight(static_cast<int>(i)) - 1)];
      b[i] = rng.uniform(-lim, lim);
    }
    inv.record(gauge.in_unit_ball(b.coords()) == gauge.in_unit_ball(inverse(g, b).coords()) ? 0.0 : 1.0, 0.0,
               "p=" + format_point(b));
  }

  // Slice evenness is Monte Carlo; fewer but still randomized cases keep the
  // suite cheap while using independent seeds for psi(t) and psi(-t).
  for (int k = 0; k < opts.cases; ++k) {
    const Direction nu = random_direction(g, opts.seed, 0xe7e0 + static_cast<std::uint64_t>(k));
    const double t = rng.uniform(0.0, gauge.r0());
    const Estimate a = slice_area(gauge, nu, t, opts.slice_samples, derive_seed(opts.seed, {0xe1, static_cast<std::uint64_t>(k)}));
    const Estimate b = slice_area(gauge, nu, -t, opts.slice_samples, derive_seed(opts.seed, {0xe2, static_cast<std::uint64_t>(k)}));
    even.record(std::abs(a.value - b.value), 3.0 * (a.std_error + b.std_error), "t=" + std::to_string(t));
  }

  auto emit = [&](const std::string& name, const Tally& t, double tol) {
    Check c = count_check(name, t.violations, t.witness);
    rep.add(std::move(c));
    rep.values[name + "_worst"] = t.worst;
    rep.values[name + "_tolerance"] = tol;
  };
  emit("associativity", assoc, 1e-10);
  emit("dilation_automorphism", autom, 1e-10);
  emit("split_recomposition", splitc, 1e-10);
  emit("split_orthogonality", orth, 1e-12);
  emit("gauge_homogeneity", homog, gauge.closed_form() ? 1e-12 : 4.0 * gauge.tolerance());
  emit("ball_inversion_symmetry", inv, 0.0);
  emit("slice_evenness", even, 3.0);
  rep.values["cases"] = opts.cases;
  rep.finalize();
  return rep;
}

}  // namespace carnot
