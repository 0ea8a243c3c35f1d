// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "carnot/beta.hpp"
#include "carnot/error.hpp"
#include "carnot/federer.hpp"
#include "carnot/gauge.hpp"
#include "carnot/group.hpp"
#include "carnot/hypersurface.hpp"
#include "carnot/parallel.hpp"
#include "carnot/slice.hpp"
#include "carnot/verify.hpp"
#include "output.hpp"

namespace carnot::cli {
namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
  std::string group = "heisenberg:1";
  std::string gauge = "koranyi";
  std::uint64_t seed = 7;
  int workers = 0;
  std::string out;
  std::string format = "csv";
  std::string calibration;
  bool override_validation = false;

  std::string samples;
  std::string nu = "1,0";
  int grid = 41;
  std::string radii = "0.4:6";
  std::vector<std::string> surfaces;
  std::string point;
  std::string suite = "all";
  int directions = 8;
  std::string candidates = "4,2,1,0.5,0.25";
  std::string validation_samples = "20000";
  std::string convexity_samples = "20000";
  double tolerance = 0.05;
};

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ParseError(what + ": '" + item + "' is not a number");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size() || !std::isfinite(v)) throw ParseError(what + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError(what + ": empty list");
  return out;
}

/// Sample counts accept scientific notation ("1e6").
std::int64_t parse_count(const std::string& text, const std::string& what) {
  const std::vector<double> v = parse_list(text, what);
  if (v.size() != 1 || v[0] < 1.0 || v[0] > 1e12 || std::floor(v[0]) != v[0]) {
    throw ParseError(what + ": expected a positive integer, got '" + text + "'");
  }
  return static_cast<std::int64_t>(v[0]);
}

DensitySchedule parse_radii(const std::string& text, std::int64_t samples, std::uint64_t seed) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("--radii: expected t0:K, got '" + text + "'");
  const double t0 = parse_list(text.substr(0, colon), "--radii")[0];
  const double k = parse_list(text.substr(colon + 1), "--radii")[0];
  if (!(t0 > 0.0) || k < 0.0 || std::floor(k) != k || k > 60) throw ParseError("--radii: need t0 > 0 and integer K >= 0");
  return DensitySchedule::geometric(t0, static_cast<int>(k), samples, seed);
}

Point parse_point(const std::string& text, const GroupModel& g) {
  if (text.empty()) return Point::zero(static_cast<std::size_t>(g.dimension()));
  Point p(parse_list(text, "--point"));
  if (p.size() != static_cast<std::size_t>(g.dimension())) {
    throw ParseError("--point: expected " + std::to_string(g.dimension()) + " coordinates");
  }
  return p;
}

Direction parse_direction(const std::string& text, const GroupModel& g) {
  std::vector<double> v = parse_list(text, "--nu");
  if (v.size() != static_cast<std::size_t>(g.horizontal_dim())) {
    throw ParseError("--nu: expected " + std::to_string(g.horizontal_dim()) + " components");
  }
  try {
    return Direction(std::move(v));
  } catch (const DomainError&) {
    throw ParseError("--nu: direction must be nonzero");
  }
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}
std::string join(std::span<const double> v) { return join(std::vector<double>(v.begin(), v.end())); }

struct Calibration {
  std::string group;
  double eps2 = 0.0;
  std::vector<double> passed;
};

Calibration read_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RefusalError("cannot read calibration file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  Calibration cal;
  auto take = [&](const std::string& key, const std::string& value) {
    if (key == "group") cal.group = value;
    if (key == "eps2") cal.eps2 = parse_list(value, "calibration eps2")[0];
  };
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.contains("summary")) throw RefusalError("malformed calibration file '" + path + "'");
    const auto& s = j["summary"];
    if (!s.contains("group") || !s.contains("eps2")) throw RefusalError("calibration file lacks group/eps2");
    cal.group = s["group"].get<std::string>();
    cal.eps2 = s["eps2"].get<double>();
    const auto& cols = j["columns"];
    const auto& rows = j["rows"];
    for (const auto& row : rows)
      if (row[1].get<bool>()) cal.passed.push_back(row[0].get<double>());
    (void)cols;
  } else {
    std::stringstream ss(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(ss, line)) {
      if (line.rfind("# ", 0) == 0) {
        const auto colon = line.find(": ");
        if (colon != std::string::npos) take(line.substr(2, colon - 2), line.substr(colon + 2));
      } else if (!header_seen) {
        header_seen = true;
      } else if (!line.empty()) {
        const auto comma = line.find(',');
        const auto comma2 = line.find(',', comma + 1);
        if (line.substr(comma + 1, comma2 - comma - 1) == "true") {
          cal.passed.push_back(parse_list(line.substr(0, comma), "calibration")[0]);
        }
      }
    }
  }
  if (cal.group.empty() || !(cal.eps2 > 0.0)) throw RefusalError("calibration file '" + path + "' lacks group/eps2");
  return cal;
}

/// d_infty gauges need a calibration produced by calibrate-dinf; the layer
/// constant must be one the calibration certified.
Gauge resolve_gauge(const GroupModel& g, const Options& o, std::string& resolved) {
  const bool dinf = o.gauge == "dinf" || o.gauge.rfind("dinf:", 0) == 0;
  if (!dinf) {
    Gauge gauge = Gauge::from_spec(g, o.gauge);
    resolved = gauge.name();
    return gauge;
  }
  if (o.calibration.empty()) {
    throw RefusalError("the d_infty gauge needs a calibrated eps2: run `carnot calibrate-dinf --group " + g.name() +
                       " --format json --out calibration.json` and pass --calibration calibration.json");
  }
  const Calibration cal = read_calibration(o.calibration);
  if (cal.group != g.name()) {
    throw RefusalError("calibration file is for group '" + cal.group + "', not '" + g.name() + "'");
  }
  if (o.gauge == "dinf") {
    Gauge gauge = Gauge::d_infty(g, {1.0, cal.eps2});
    resolved = gauge.name();
    return gauge;
  }
  Gauge gauge = Gauge::from_spec(g, o.gauge);
  const double eps2 = gauge.eps().size() > 1 ? gauge.eps()[1] : 1.0;
  const bool certified = eps2 == cal.eps2 || std::find(cal.passed.begin(), cal.passed.end(), eps2) != cal.passed.end();
  if (!certified) {
    throw RefusalError("eps2 = " + format_double(eps2) + " was not certified by the calibration (calibrated eps2 = " +
                       format_double(cal.eps2) + "); rerun calibrate-dinf");
  }
  resolved = gauge.name();
  return gauge;
}

void emit(const Table& t, const Options& o, std::ostream& out) {
  const std::string body = o.format == "json" ? to_json(t) : to_csv(t);
  if (o.out.empty()) {
    out << body;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Error("cannot open output file '" + o.out + "'");
  f << body;
  if (!f) throw Error("failed writing '" + o.out + "'");
}

/// Echo of every option of the subcommand, defaults included. Paths of the
/// output and the worker cap are left out since they do not affect results.
std::vector<std::pair<std::string, std::string>> resolved_config(const CLI::App& sub) {
  std::vector<std::pair<std::string, std::string>> cfg;
  cfg.emplace_back("version", kVersion);
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "out" || name == "workers" || name == "config" || name.empty()) continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      for (std::size_t i = 0; i < r.size(); ++i) value += (i ? ";" : "") + r[i];
      if (r.empty() || (opt->get_type_size() == 0 && value.empty())) value = "true";
    } else {
      value = opt->get_default_str();
      if (value.empty() && opt->get_type_size() == 0) value = "false";
    }
    cfg.emplace_back(name, value);
  }
  return cfg;
}

void add_estimate(std::vector<Cell>& row, const Estimate& e) {
  row.emplace_back(e.value);
  row.emplace_back(e.std_error);
}

BetaOptions beta_options(const Options& o, const Gauge& gauge, Table& t, std::int64_t default_samples) {
  BetaOptions bo;
  bo.samples = o.samples.empty() ? default_samples : parse_count(o.samples, "--samples");
  bo.grid_size = o.grid;
  bo.seed = o.seed;
  bo.convexity_samples = parse_count(o.convexity_samples, "--convexity-samples");
  bo.override_validation = o.override_validation;
  const ValidationReport v = validate(gauge, parse_count(o.validation_samples, "--validation-samples"),
                                      derive_seed(o.seed, {0x7a11d}));
  bo.validation_passed = v.passed();
  t.set("validation_passed", v.passed());
  return bo;
}

int cmd_beta(const Options& o, const GroupModel& g, Table& t) {
  std::string resolved;
  const Gauge gauge = resolve_gauge(g, o, resolved);
  t.set("gauge_resolved", resolved);
  const BetaOptions bo = beta_options(o, gauge, t, 100000);
  const BetaResult r = beta(gauge, parse_direction(o.nu, g), bo);
  t.set("method", std::string(to_string(r.method)));
  t.columns = {"nu", "beta", "beta_stderr", "argmax_t", "omega", "omega_stderr", "c_Q-1", "c_Q-1_stderr", "seed"};
  std::vector<Cell> row{join(r.nu.components())};
  add_estimate(row, r.value);
  row.emplace_back(r.argmax_t);
  row.emplace_back(r.constants.omega);
  row.emplace_back(r.constants.omega_stderr);
  row.emplace_back(r.constants.c);
  row.emplace_back(r.constants.c_stderr);
  row.emplace_back(o.seed);
  t.rows.push_back(std::move(row));
  return 0;
}

int cmd_constancy(const Options& o, const GroupModel& g, Table& t) {
  std::string resolved;
  const Gauge gauge = resolve_gauge(g, o, resolved);
  t.set("gauge_resolved", resolved);
  if (o.directions < 2) throw ParseError("--directions must be at least 2");
  const BetaOptions bo = beta_options(o, gauge, t, 100000);
  const ConstancyReport r = beta_constancy(gauge, o.directions, bo, o.seed);
  t.set("constant", r.constant);
  t.set("max_deviation", r.max_deviation);
  t.set("max_deviation_sigma", r.max_deviation_sigma);
  t.columns = {"index", "nu", "beta", "beta_stderr", "argmax_t", "method"};
  for (std::size_t i = 0; i < r.results.size(); ++i) {
    const BetaResult& b = r.results[i];
    std::vector<Cell> row{static_cast<std::int64_t>(i), join(b.nu.components())};
    add_estimate(row, b.value);
    row.emplace_back(b.argmax_t);
    row.emplace_back(std::string(to_string(b.method)));
    t.rows.push_back(std::move(row));
  }
  return 0;
}

int cmd_profile(const Options& o, const GroupModel& g, Table& t) {
  std::string resolved;
  const Gauge gauge = resolve_gauge(g, o, resolved);
  t.set("gauge_resolved", resolved);
  const std::int64_t samples = o.samples.empty() ? 100000 : parse_count(o.samples, "--samples");
  const SliceProfile p = slice_profile(gauge, parse_direction(o.nu, g), o.grid, samples, o.seed);
  const ConcavityReport c = concavity_report(p, busemann_exponent(g));
  t.set("support", p.support);
  t.set("concavity_exponent", c.exponent);
  t.set("concavity_violations", static_cast<std::int64_t>(c.violations));
  t.columns = {"t", "psi", "psi_stderr", "n_samples", "seed"};
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    std::vector<Cell> row{p.grid[i]};
    add_estimate(row, p.areas[i]);
    row.emplace_back(p.areas[i].n_samples);
    row.emplace_back(p.areas[i].seed);
    t.rows.push_back(std::move(row));
  }
  return 0;
}

std::vector<SurfaceSpec> resolve_surfaces(const Options& o, const GroupModel& g, bool verify_defaults) {
  std::vector<SurfaceSpec> out;
  if (o.surfaces.empty()) {
    if (verify_defaults) {
      out.push_back(surface_from_spec(g, "vplane", Point::zero(static_cast<std::size_t>(g.dimension()))));
    }
    Point x = o.point.empty() ? Point::zero(static_cast<std::size_t>(g.dimension())) : parse_point(o.point, g);
    if (o.point.empty()) x[0] = 1.0;
    out.push_back(surface_from_spec(g, "tplane", x));
    return out;
  }
  const Point x = parse_point(o.point, g);
  for (const std::string& spec : o.surfaces) out.push_back(surface_from_spec(g, spec, x));
  return out;
}

int cmd_blowup(const Options& o, const GroupModel& g, Table& t) {
  std::string resolved;
  const Gauge gauge = resolve_gauge(g, o, resolved);
  t.set("gauge_resolved", resolved);
  const std::int64_t samples = o.samples.empty() ? 200000 : parse_count(o.samples, "--samples");
  const DensitySchedule sched = parse_radii(o.radii, samples, o.seed);
  const BetaOptions bo = beta_options(o, gauge, t, 100000);
  const std::vector<SurfaceSpec> surfaces = resolve_surfaces(o, g, false);
  t.columns = {"surface", "t", "ratio", "ratio_stderr", "centered", "centered_stderr", "search_max",
               "search_max_stderr", "running_sup", "best_center", "evaluations"};
  int index = 0;
  for (const SurfaceSpec& s : surfaces) {
    const DensityReport d = federer_density(s, gauge, s.base(), sched);
    const BetaResult b = beta(gauge, s.base_normal(), bo);
    const std::string key = surfaces.size() > 1 ? "[" + std::to_string(index) + "]" : "";
    t.set("surface" + key, s.name());
    t.set("point" + key, join(s.base().coords()));
    t.set("normal" + key, join(s.base_normal().components()));
    t.set("theta" + key, d.extrapolated_theta.value);
    t.set("theta_stderr" + key, d.extrapolated_theta.std_error);
    t.set("centered_theta" + key, d.extrapolated_centered.value);
    t.set("centered_theta_stderr" + key, d.extrapolated_centered.std_error);
    t.set("beta" + key, b.value.value);
    t.set("beta_stderr" + key, b.value.std_error);
    t.set("converged" + key, d.converged);
    t.set("truncated" + key, d.truncated);
    if (d.truncated) t.set("truncation_reason" + key, d.truncation_reason);
    for (std::size_t k = 0; k < d.records.size(); ++k) {
      const RadiusRecord& r = d.records[k];
      std::vector<Cell> row{s.name(), r.t};
      add_estimate(row, r.ratio);
      add_estimate(row, r.centered_ratio);
      add_estimate(row, r.search_ratio);
      row.emplace_back(d.running_sup[k]);
      row.emplace_back(join(r.best_center.coords()));
      row.emplace_back(static_cast<std::int64_t>(r.evaluations));
      t.rows.push_back(std::move(row));
    }
    ++index;
  }
  return 0;
}

void append_report(Table& t, const VerificationReport& r) {
  t.set(r.suite + ".pass", r.pass);
  t.set(r.suite + ".hypothesis_met", r.hypothesis_met);
  for (const auto& [k, v] : r.values) t.set(r.suite + "." + k, v);
  for (const Check& c : r.checks) {
    t.rows.push_back({r.suite, c.name, c.target, c.observed, c.tolerance, c.pass, c.informational, c.detail});
  }
}

int cmd_verify(const Options& o, const GroupModel& g, Table& t, std::ostream& out) {
  static const std::vector<std::string> suites{"convexity", "symmetry", "exactness", "busemann", "constancy", "blowup"};
  std::vector<std::string> selected;
  if (o.suite == "all") {
    selected = suites;
  } else {
    std::stringstream ss(o.suite);
    std::string s;
    while (std::getline(ss, s, ',')) {
      if (std::find(suites.begin(), suites.end(), s) == suites.end()) throw ParseError("--suite: unknown suite '" + s + "'");
      selected.push_back(s);
    }
  }
  std::string resolved;
  const Gauge gauge = resolve_gauge(g, o, resolved);
  t.set("gauge_resolved", resolved);
  const std::int64_t samples = o.samples.empty() ? 100000 : parse_count(o.samples, "--samples");
  const std::int64_t conv_samples = parse_count(o.convexity_samples, "--convexity-samples");
  t.columns = {"suite", "check", "target", "observed", "tolerance", "pass", "informational", "detail"};

  bool pass = true;
  auto record = [&](const VerificationReport& r) {
    append_report(t, r);
    pass = pass && r.pass;
  };
  for (const std::string& s : selected) {
    if (s == "convexity") {
      record(convexity_check(gauge, conv_samples, derive_seed(o.seed, {1})));
    } else if (s == "symmetry") {
      record(symmetry_check(gauge, {}, conv_samples, derive_seed(o.seed, {2})));
    } else if (s == "exactness") {
      ExactnessOptions eo;
      eo.seed = derive_seed(o.seed, {3});
      record(exactness_suite(gauge, eo));
    } else if (s == "busemann") {
      BusemannOptions bo;
      bo.grid_size = o.grid;
      bo.samples = samples;
      bo.convexity_samples = conv_samples;
      bo.seed = derive_seed(o.seed, {4});
      record(busemann_suite(gauge, parse_direction(o.nu, g), bo));
    } else if (s == "constancy") {
      BetaOptions bo;
      bo.samples = samples;
      bo.grid_size = o.grid;
      bo.convexity_samples = conv_samples;
      bo.seed = derive_seed(o.seed, {5});
      record(constancy_suite(gauge, o.directions, bo, bo.seed));
    } else if (s == "blowup") {
      const std::int64_t ball_samples = o.samples.empty() ? 200000 : samples;
      const DensitySchedule sched = parse_radii(o.radii, ball_samples, derive_seed(o.seed, {6}));
      BlowupOptions bo;
      bo.relative_tolerance = o.tolerance;
      bo.beta.samples = samples;
      bo.beta.grid_size = o.grid;
      bo.beta.convexity_samples = conv_samples;
      bo.beta.seed = derive_seed(o.seed, {7});
      record(blowup_suite(resolve_surfaces(o, g, true), gauge, sched, bo));
    }
  }
  t.set("pass", pass);
  if (!o.out.empty()) out << to_text(t);
  return pass ? 0 : 1;
}

int cmd_validate(const Options& o, const GroupModel& g, Table& t) {
  const Gauge gauge = Gauge::from_spec(g, o.gauge);
  t.set("gauge_resolved", gauge.name());
  const std::int64_t samples = o.samples.empty() ? 100000 : parse_count(o.samples, "--samples");
  const ValidationReport r = validate(gauge, samples, o.seed);
  t.set("passed", r.passed());
  t.set("worst_violation", r.worst_violation);
  t.set("worst_check", r.worst_check);
  if (r.witness) {
    t.set("witness_p", join(r.witness->first.coords()));
    t.set("witness_q", join(r.witness->second.coords()));
  }
  t.columns = {"check", "trials", "violations", "violation_rate", "violation_rate_stderr", "worst_violation"};
  for (const ValidationCheck& c : r.checks) {
    const double n = static_cast<double>(c.trials);
    const double p = n > 0 ? static_cast<double>(c.violations) / n : 0.0;
    t.rows.push_back({c.name, c.trials, c.violations, p, n > 0 ? std::sqrt(p * (1 - p) / n) : 0.0, c.worst_violation});
  }
  return r.passed() ? 0 : 1;
}

int cmd_calibrate(const Options& o, const GroupModel& g, Table& t) {
  const std::int64_t samples = o.samples.empty() ? 100000 : parse_count(o.samples, "--samples");
  const CalibrationResult r = calibrate_dinfty(g, parse_list(o.candidates, "--candidates"), samples, o.seed);
  t.set("group", g.name());
  t.set("eps2", r.eps2);
  t.set("certification", r.certification);
  t.columns = {"eps2", "passed", "worst_violation"};
  for (const CalibrationCandidate& c : r.candidates) t.rows.push_back({c.eps2, c.passed, c.worst_violation});
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vertical slice constants and blow-up densities on step-2 stratified groups", "carnot"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Options o;
  auto common = [&](CLI::App* sub, bool gauge_needed, const std::string& samples_default) {
    sub->add_option("--group", o.group, "heisenberg:N, abelian:N or a model file")
        ->capture_default_str()
        ->envname("CARNOT_GROUP");
    if (gauge_needed) {
      sub->add_option("--gauge", o.gauge, "koranyi, dinf[:eps2=E], starball:rho=R, twoball:r=R,c=C, aniso")
          ->capture_default_str()
          ->envname("CARNOT_GAUGE");
    }
    sub->add_option("--seed", o.seed, "Master seed")->capture_default_str()->envname("CARNOT_SEED");
    sub->add_option("--workers", o.workers, "Worker threads (0 = hardware); results do not depend on it")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber)
        ->envname("CARNOT_WORKERS");
    sub->add_option("--out", o.out, "Output file (default stdout)")->envname("CARNOT_OUT");
    sub->add_option("--format", o.format, "csv or json")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}))
        ->envname("CARNOT_FORMAT");
    sub->add_option("--samples", o.samples, "Monte-Carlo samples (per slice or per ball); accepts 1e6")
        ->default_str(samples_default)
        ->envname("CARNOT_SAMPLES");
  };
  auto calibrated = [&](CLI::App* sub) {
    sub->add_option("--calibration", o.calibration, "Output of calibrate-dinf, required for dinf gauges")
        ->envname("CARNOT_CALIBRATION");
  };
  auto beta_flags = [&](CLI::App* sub) {
    sub->add_option("--grid", o.grid, "Slice grid size (odd)")->capture_default_str()->envname("CARNOT_GRID");
    sub->add_option("--convexity-samples", o.convexity_samples, "Pairs for the midpoint convexity test")
        ->capture_default_str();
    sub->add_option("--validation-samples", o.validation_samples, "Samples for the gauge validation gate")
        ->capture_default_str();
    sub->add_flag("--override-validation", o.override_validation, "Compute even if gauge validation fails")
        ->capture_default_str();
  };

  auto* beta_cmd = app.add_subcommand("beta", "beta(d, nu): maximal vertical slice area of the unit ball");
  common(beta_cmd, true, "100000");
  calibrated(beta_cmd);
  beta_flags(beta_cmd);
  beta_cmd->add_option("--nu", o.nu, "Horizontal direction, comma separated")->capture_default_str()->envname("CARNOT_NU");

  auto* constancy_cmd = app.add_subcommand("beta-constancy", "beta over random horizontal directions");
  common(constancy_cmd, true, "100000");
  calibrated(constancy_cmd);
  beta_flags(constancy_cmd);
  constancy_cmd->add_option("--directions", o.directions, "Number of random directions")->capture_default_str();

  auto* profile_cmd = app.add_subcommand("slice-profile", "Vertical slice areas psi(t) on a grid");
  common(profile_cmd, true, "100000");
  calibrated(profile_cmd);
  profile_cmd->add_option("--nu", o.nu, "Horizontal direction")->capture_default_str()->envname("CARNOT_NU");
  profile_cmd->add_option("--grid", o.grid, "Grid size (odd)")->capture_default_str()->envname("CARNOT_GRID");

  auto* blowup_cmd = app.add_subcommand("blowup", "Spherical Federer density of a surface versus beta");
  common(blowup_cmd, true, "200000");
  calibrated(blowup_cmd);
  beta_flags(blowup_cmd);
  blowup_cmd->add_option("--surface", o.surfaces, "tplane, vplane[:nu=a,b] or expr:<f>")->envname("CARNOT_SURFACE");
  blowup_cmd->add_option("--point", o.point, "Base point on the surface (default 1,0,...)")->envname("CARNOT_POINT");
  blowup_cmd->add_option("--radii", o.radii, "Schedule t0:K, radii t0 2^-k")->capture_default_str()->envname("CARNOT_RADII");

  auto* verify_cmd = app.add_subcommand("verify", "Verification suites for the slice and density results");
  common(verify_cmd, true, "100000 per slice, 200000 per ball");
  calibrated(verify_cmd);
  verify_cmd->add_option("--suite", o.suite, "all or a comma list of convexity,symmetry,exactness,busemann,constancy,blowup")
      ->capture_default_str();
  verify_cmd->add_option("--nu", o.nu, "Direction for the busemann suite")->capture_default_str();
  verify_cmd->add_option("--grid", o.grid, "Slice grid size")->capture_default_str();
  verify_cmd->add_option("--directions", o.directions, "Directions for the constancy suite")->capture_default_str();
  verify_cmd->add_option("--radii", o.radii, "Blow-up schedule t0:K")->capture_default_str();
  verify_cmd->add_option("--surface", o.surfaces, "Surfaces for the blowup suite");
  verify_cmd->add_option("--point", o.point, "Base point for --surface");
  verify_cmd->add_option("--tolerance", o.tolerance, "Relative tolerance of the blowup suite")->capture_default_str();
  verify_cmd->add_option("--convexity-samples", o.convexity_samples, "Samples for convexity and symmetry")
      ->capture_default_str();

  auto* validate_cmd = app.add_subcommand("validate-gauge", "Sampled homogeneity, symmetry and triangle checks");
  common(validate_cmd, true, "100000");

  auto* calibrate_cmd = app.add_subcommand("calibrate-dinf", "Largest eps2 for which d_infty passes validation");
  common(calibrate_cmd, false, "100000");
  calibrate_cmd->add_option("--candidates", o.candidates, "Candidate eps2 values")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    set_max_workers(static_cast<unsigned>(o.workers));
    const GroupModel g = GroupModel::from_spec(o.group);
    Table t;
    t.command = sub->get_name();
    t.config = resolved_config(*sub);
    int code = 0;
    if (sub == beta_cmd) code = cmd_beta(o, g, t);
    else if (sub == constancy_cmd) code = cmd_constancy(o, g, t);
    else if (sub == profile_cmd) code = cmd_profile(o, g, t);
    else if (sub == blowup_cmd) code = cmd_blowup(o, g, t);
    else if (sub == verify_cmd) code = cmd_verify(o, g, t, out);
    else if (sub == validate_cmd) code = cmd_validate(o, g, t);
    else if (sub == calibrate_cmd) code = cmd_calibrate(o, g, t);
    emit(t, o, out);
    return code;
  } catch (const ParseError& e) {
    err << "carnot: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "carnot: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace carnot::cli
