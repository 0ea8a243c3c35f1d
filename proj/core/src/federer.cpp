// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include "carnot/federer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "carnot/error.hpp"
#include "carnot/random.hpp"

namespace carnot {

DensitySchedule DensitySchedule::geometric(double t0, int K, std::int64_t samples, std::uint64_t seed) {
  if (!(t0 > 0.0) || K < 0) throw DomainError("radius schedule needs t0 > 0 and K >= 0");
  DensitySchedule sched;
  for (int k = 0; k <= K; ++k) sched.radii.push_back(std::ldexp(t0, -k));
  sched.samples_per_ball = samples;
  sched.seed = seed;
  return sched;
}

void DensitySchedule::validate() const {
  if (radii.empty()) throw DomainError("radius schedule is empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw DomainError("radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw DomainError("radii must be strictly decreasing");
  }
  if (center_search.multistart_count < 1 || center_search.local_steps < 0) {
    throw DomainError("center search needs at least one start");
  }
  if (!(center_search.initial_step > 0.0) || !(center_search.min_step > 0.0)) {
    throw DomainError("center search steps must be positive");
  }
}

Estimate tail_average(std::span<const Estimate> values, std::size_t tail) {
  if (values.empty()) return {};
  const std::size_t begin = values.size() > tail ? values.size() - tail : 0;
  double wsum = 0.0, vsum = 0.0;
  bool exact = false;
  double exact_sum = 0.0;
  std::size_t exact_count = 0;
  for (std::size_t i = begin; i < values.size(); ++i) {
    const double se = values[i].std_error;
    if (se <= 0.0) {
      exact = true;
      exact_sum += values[i].value;
      ++exact_count;
      continue;
    }
    const double w = 1.0 / (se * se);
    wsum += w;
    vsum += w * values[i].value;
  }
  Estimate out;
  out.n_samples = 0;
  for (std::size_t i = begin; i < values.size(); ++i) out.n_samples += values[i].n_samples;
  out.seed = values.back().seed;
  if (exact) {
    out.value = exact_sum / static_cast<double>(exact_count);
    return out;
  }
  out.value = vsum / wsum;
  out.std_error = 1.0 / std::sqrt(wsum);
  return out;
}

namespace {

DensityReport run_density(const SurfaceSpec& surface, const Gauge& gauge, const Point& x,
                          const DensitySchedule& sched, bool search) {
  sched.validate();
  const SurfaceSpec s = surface.base() == x ? surface : surface.rebased(x);
  const GroupModel& g = s.model();
  const std::size_t n = static_cast<std::size_t>(g.dimension());
  const int Q = g.homogeneous_dimension();

  DensityReport report;
  for (std::size_t k = 0; k < sched.radii.size(); ++k) {
    const double t = sched.radii[k];
    const double jac = std::pow(t, Q - 1);
    RadiusRecord rec;
    rec.t = t;
    try {
      // Centers y in B(x, t) give balls B(y, t) inside B(x, 2t).
      const PerimeterSampler sampler(s, gauge, t, x, 2.0 * t, sched.samples_per_ball,
                                     derive_seed(sched.seed, {0xfede7ULL, k}));
      auto ratio_at = [&](const Point& w) {
        const Point y = multiply(g, x, dilate(g, t, w));
        Estimate e = sampler.evaluate(y, t);
        e.value /= jac;
        e.std_error /= jac;
        ++rec.evaluations;
        return e;
      };

      const Point origin = Point::zero(n);
      rec.centered_ratio = ratio_at(origin);
      rec.ratio = rec.centered_ratio;
      rec.best_offset = origin;

      if (search) {
        const CenterSearch& cs = sched.center_search;
        Rng rng(sched.seed, {0x57a27ULL, k});
        for (int start = 0; start < cs.multistart_count; ++start) {
          Point w = Point::zero(n);
          if (start > 0) sample_unit_ball(gauge, rng, w.coords());
          Estimate current = start == 0 ? rec.centered_ratio : ratio_at(w);
          double step = cs.initial_step;
          for (int it = 0; it < cs.local_steps && step >= cs.min_step; ++it) {
            // Best-improvement compass step over +-step e_i.
            Point best_w = w;
            Estimate best = current;
            for (std::size_t i = 0; i < n; ++i) {
              for (double sign : {1.0, -1.0}) {
                Point trial = w;
                trial[i] += sign * step;
                if (!gauge.in_unit_ball(trial.coords())) continue;
                const Estimate e = ratio_at(trial);
                if (e.value > best.value) {
                  best = e;
                  best_w = trial;
                }
              }
            }
            if (best.value > current.value) {
              w = best_w;
              current = best;
            } else {
              step *= 0.5;
            }
          }
          if (current.value > rec.ratio.value) {
            rec.ratio = current;
            rec.best_offset = w;
          }
        }
      }
      rec.best_center = multiply(g, x, dilate(g, t, rec.best_offset));
      rec.search_ratio = rec.ratio;
      if (search) {
        // The maximum over frozen samples is biased upward; re-estimate the
        // selected ball on independent samples.
        const PerimeterSampler fresh(s, gauge, t, rec.best_center, t, sched.samples_per_ball,
                                     derive_seed(sched.seed, {0x4e57ULL, k}));
        rec.ratio = fresh.evaluate(rec.best_center, t);
        rec.ratio.value /= jac;
        rec.ratio.std_error /= jac;
      }
    } catch (const RegionError& e) {
      report.truncated = true;
      report.truncation_reason = "t = " + std::to_string(t) + ": " + e.what();
      break;
    }
    report.records.push_back(std::move(rec));
  }
  if (report.records.empty()) {
    throw RegionError("no radius of the schedule could be sampled: " + report.truncation_reason);
  }

  report.running_sup.resize(report.records.size());
  double sup = -std::numeric_limits<double>::infinity();
  for (std::size_t k = report.records.size(); k-- > 0;) {
    sup = std::max(sup, report.records[k].ratio.value);
    report.running_sup[k] = sup;
  }
  std::vector<Estimate> best, centered;
  for (const auto& r : report.records) {
    best.push_back(r.ratio);
    centered.push_back(r.centered_ratio);
  }
  report.extrapolated_theta = tail_average(best);
  report.extrapolated_centered = tail_average(centered);

  // Converged when the tail ratios agree with each other within MC noise.
  const std::size_t tail = std::min<std::size_t>(3, best.size());
  report.converged = tail >= 2;
  for (std::size_t i = best.size() - tail; i < best.size(); ++i) {
    for (std::size_t j = i + 1; j < best.size(); ++j) {
      report.converged = report.converged && agree_within(best[i], best[j]);
    }
  }
  return report;
}

}  // namespace

DensityReport federer_density(const SurfaceSpec& s, const Gauge& gauge, const Point& x,
                              const DensitySchedule& sched) {
  return run_density(s, gauge, x, sched, true);
}

Estimate centered_density(const SurfaceSpec& s, const Gauge& gauge, const Point& x,
                          const DensitySchedule& sched) {
  return run_density(s, gauge, x, sched, false).extrapolated_centered;
}

}  // namespace carnot
