/*
 * Copyright 2026 The fil Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fil/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "fil/checks.hpp"
#include "fil/config.hpp"
#include "fil/expression.hpp"
#include "fil/hardy.hpp"
#include "fil/kernels.hpp"
#include "fil/measure.hpp"
#include "fil/perturbation.hpp"
#include "fil/semigroup.hpp"
#include "fil/variational.hpp"

namespace fil::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kLowerLabel = "lower estimate: <= C_S(p), not equal";

struct Context {
  RunConfig cfg;
  std::string command;
  MeasureDescriptor desc;
  GridSpec grid;
  std::optional<Measure1D> mu;
  json results = json::array();
  json violations = json::array();
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json assertion(const std::string& name, double value, double bound, const std::string& relation,
               double tolerance, bool pass) {
  return json{{"name", name},         {"value", number_or_null(value)},
              {"bound", number_or_null(bound)}, {"relation", relation},
              {"tolerance", tolerance}, {"pass", pass}};
}

void record(Context& ctx, json& result, json a) {
  if (!a["pass"].get<bool>()) {
    json v = a;
    v["command"] = ctx.command;
    if (result.contains("p")) v["p"] = result["p"];
    ctx.violations.push_back(v);
  }
  result["assertions"].push_back(std::move(a));
}

std::string format_p(double p) { return fmt::format("{}", p); }

void build_measure_for(Context& ctx) {
  ctx.desc = MeasureDescriptor::parse(ctx.cfg.measure_spec);
  ctx.grid = default_grid(ctx.desc, ctx.cfg.grid_n);
  ctx.mu = build_measure(ctx.desc, ctx.grid);
}

NuDensity make_nu(const Context& ctx) {
  const std::string& s = ctx.cfg.nu_spec;
  if (s == "same-as-mu") return NuDensity::same_as(*ctx.mu);
  if (s == "lebesgue") return NuDensity(ctx.grid, std::vector<double>(ctx.grid.n, 1.0));
  if (s.rfind("expr:", 0) == 0) {
    const GridFunction g = Expression::parse(s.substr(5)).sample(ctx.grid);
    return NuDensity(ctx.grid, std::vector<double>(g.values().begin(), g.values().end()));
  }
  throw InputError("nu must be 'same-as-mu', 'lebesgue' or 'expr:<expression>'");
}

OptimizerOptions optimizer_options(const RunConfig& cfg) {
  OptimizerOptions o;
  o.seeds = cfg.seeds;
  o.max_iter = cfg.max_iter;
  o.rng_seed = cfg.rng_seed;
  return o;
}

bool unbounded_family(MeasureFamily f) {
  return f == MeasureFamily::gaussian || f == MeasureFamily::exp_power ||
         f == MeasureFamily::double_well;
}

// Set when a supremum sits in the outer 5% of a truncated support: the value
// then reflects the truncation more than the measure.
bool at_truncation_edge(const Context& ctx, double x) {
  if (!unbounded_family(ctx.desc.family)) return false;
  const double width = ctx.grid.x_max - ctx.grid.x_min;
  return x <= ctx.grid.x_min + 0.05 * width || x >= ctx.grid.x_max - 0.05 * width;
}

json sandwich_json(const Context& ctx, const SobolevSandwich& s) {
  auto side = [](const HardyValue& v) {
    return json{{"value", number_or_null(v.value)}, {"argmax", v.argmax}, {"diverged", v.diverged}};
  };
  return json{{"kind", "sandwich"},
              {"p", s.p},
              {"cs_lower", number_or_null(s.cs_lower)},
              {"cs_upper", number_or_null(s.cs_upper)},
              {"c_raw_lower", number_or_null(s.c_raw_lower)},
              {"c_raw_upper", number_or_null(s.c_raw_upper)},
              {"argmax_lower", s.argmax_lower},
              {"argmax_upper", s.argmax_upper},
              {"diverged", s.diverged},
              {"argmax_near_truncation",
               at_truncation_edge(ctx, s.argmax_lower) || at_truncation_edge(ctx, s.argmax_upper)},
              {"divergence_cap", kDivergenceCap},
              {"b_minus", side(s.b_minus)},
              {"b_plus", side(s.b_plus)},
              {"B_minus", side(s.B_minus)},
              {"B_plus", side(s.B_plus)},
              {"assertions", json::array()}};
}

std::optional<SobolevSandwich> finite_sandwich(const Measure1D& mu, double p) {
  if (!(p > 2.0)) return std::nullopt;
  SobolevSandwich s = sobolev_sandwich(mu, NuDensity::same_as(mu), p);
  if (s.diverged) return std::nullopt;
  return s;
}

void cmd_bounds(Context& ctx) {
  build_measure_for(ctx);
  const NuDensity nu = make_nu(ctx);
  for (double p : ctx.cfg.p_list) {
    if (!(p > 2.0)) throw InputError(fmt::format("bounds requires p > 2 (got {})", p));
  }
  for (double p : ctx.cfg.p_list) {
    const SobolevSandwich s = sobolev_sandwich(*ctx.mu, nu, p);
    json r = sandwich_json(ctx, s);
    if (!s.diverged) {
      record(ctx, r, assertion("cs_lower <= cs_upper", s.cs_lower, s.cs_upper, "<=", 0.0,
                               s.cs_lower <= s.cs_upper));
    }
    *ctx.err << fmt::format("p={} cs_lower={} cs_upper={} diverged={}\n", format_p(p),
                            std::isfinite(s.cs_lower) ? fmt::format("{:.9g}", s.cs_lower) : "inf",
                            std::isfinite(s.cs_upper) ? fmt::format("{:.9g}", s.cs_upper) : "inf",
                            s.diverged);
    ctx.results.push_back(std::move(r));
  }
}

void cmd_gap(Context& ctx) {
  build_measure_for(ctx);
  const SpectralGap g = spectral_gap_eigenpair(Generator(*ctx.mu));
  ctx.results.push_back(json{{"kind", "spectral_gap"},
                             {"lambda1", g.lambda1},
                             {"c_p", g.c_p},
                             {"iterations", g.iterations},
                             {"tolerance", 1e-14},
                             {"assertions", json::array()}});
  *ctx.out << fmt::format("{:.10g}\n", g.lambda1);
}

json empirical_json(const EmpiricalConstant& e) {
  json seeds = json::array();
  for (const SeedResult& s : e.seeds) {
    seeds.push_back(json{{"label", s.label},
                         {"value", s.value},
                         {"iterations", s.iterations},
                         {"converged", s.converged}});
  }
  return json{{"kind", "empirical"},
              {"p", e.p},
              {"value", e.value},
              {"meaning", kLowerLabel},
              {"seed_label", e.seed_label},
              {"iterations", e.iterations},
              {"converged", e.converged},
              {"seeds", seeds},
              {"assertions", json::array()}};
}

void cmd_empirical(Context& ctx) {
  build_measure_for(ctx);
  const OptimizerOptions opt = optimizer_options(ctx.cfg);
  for (double p : ctx.cfg.p_list) {
    const EmpiricalConstant e = maximize_constant(*ctx.mu, p, opt);
    json r = empirical_json(e);
    if (const auto s = finite_sandwich(*ctx.mu, p); s && e.converged) {
      constexpr double tol = 1e-2;
      record(ctx, r, assertion("empirical <= cs_upper", e.value, s->cs_upper * (1.0 + tol), "<=",
                               tol, e.value <= s->cs_upper * (1.0 + tol)));
    }
    *ctx.err << fmt::format("p={} empirical={:.9g} ({})\n", format_p(p), e.value, kLowerLabel);
    ctx.results.push_back(std::move(r));
  }
}

std::vector<double> time_grid(const RunConfig& cfg) {
  std::vector<double> t;
  const auto steps = static_cast<long long>(std::floor(cfg.t_max / cfg.t_step * (1.0 + 1e-12)));
  for (long long k = 0; k <= steps; ++k) t.push_back(static_cast<double>(k) * cfg.t_step);
  if (t.back() < cfg.t_max * (1.0 - 1e-12)) t.push_back(cfg.t_max);
  return t;
}

std::string curve_path_for(const std::string& base, double p, bool multiple) {
  if (!multiple) return base;
  const auto dot = base.rfind('.');
  const auto slash = base.find_last_of("/\\");
  const std::string suffix = "_p" + format_p(p);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return base + suffix;
  return base.substr(0, dot) + suffix + base.substr(dot);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
  if (!f) throw InputError("cannot write '" + path + "'");
}

void cmd_decay(Context& ctx) {
  build_measure_for(ctx);
  const Generator gen(*ctx.mu);
  const GridFunction f0 = Expression::parse(ctx.cfg.f0).sample(ctx.grid);
  const std::vector<double> times = time_grid(ctx.cfg);
  const bool multiple = ctx.cfg.p_list.size() > 1;
  for (double p : ctx.cfg.p_list) {
    const DecayCurve curve = decay_curve(gen, f0, p, times, ctx.cfg.dt);
    const std::string csv = decay_curve_csv(curve);
    if (ctx.cfg.curve_path.empty()) {
      if (multiple) *ctx.out << "# p = " << format_p(p) << "\n";
      *ctx.out << csv;
    } else {
      write_text(curve_path_for(ctx.cfg.curve_path, p, multiple), csv);
    }

    std::optional<double> c_s = ctx.cfg.c_s;
    std::string source = "command line";
    if (!c_s) {
      if (const auto s = finite_sandwich(*ctx.mu, p)) {
        c_s = s->cs_upper;
        source = "hardy upper bound";
      } else {
        source = "none (no certified constant; curve reported without verification)";
      }
    }
    json r{{"kind", "decay"},
           {"p", p},
           {"c_s", c_s ? json(*c_s) : json(nullptr)},
           {"c_s_source", source},
           {"dt", ctx.cfg.dt},
           {"mu_f0", curve.mu_f0},
           {"mu_f0_pow", number_or_null(curve.mu_f0_pow)},
           {"max_mass_drift", curve.max_mass_drift},
           {"max_principle_guaranteed", curve.max_principle_guaranteed},
           {"fitted_rate", curve.fitted_rate ? json(*curve.fitted_rate) : json(nullptr)},
           {"assertions", json::array()}};
    if (c_s) {
      r["expected_rate"] = 2.0 / *c_s;
      const DecayVerification v = verify_decay_bounds(curve, *c_s, p, curve.mu_f0_pow);
      r["slack"] = v.slack;
      r["abs_tol"] = v.abs_tol;
      std::size_t checked = 0;
      for (const DecayCheck& c : v.checks) {
        ++checked;
        if (!c.pass) {
          json a = assertion(fmt::format("{}(t={}) <= bound", c.quantity, c.t), c.value,
                             v.slack * c.bound + v.abs_tol, "<=", v.slack - 1.0, false);
          a["t"] = c.t;
          record(ctx, r, std::move(a));
        }
      }
      r["checks_total"] = checked;
      r["checks_passed"] = v.pass;
      *ctx.err << fmt::format("decay p={} c_s={} ({}) checks={} pass={}\n", format_p(p), *c_s,
                              source, checked, v.pass);
    } else {
      *ctx.err << fmt::format("decay p={}: {}\n", format_p(p), source);
    }
    ctx.results.push_back(std::move(r));
  }
}

void cmd_perturb(Context& ctx) {
  build_measure_for(ctx);
  const GridFunction u = Expression::parse(ctx.cfg.u).sample(ctx.grid);
  const OptimizerOptions opt = optimizer_options(ctx.cfg);
  for (double p : ctx.cfg.p_list) {
    const PerturbationReport rep = perturbation_check(*ctx.mu, u, p, opt);
    json r{{"kind", "perturbation"},
           {"p", p},
           {"osc", rep.osc},
           {"factor", rep.factor},
           {"base_upper", rep.base_upper},
           {"base_source", rep.inconclusive ? "empirical (inconclusive)" : "hardy upper bound"},
           {"perturbed_emp", rep.perturbed_emp},
           {"perturbed_meaning", kLowerLabel},
           {"ratio", rep.ratio},
           {"inconclusive", rep.inconclusive},
           {"assertions", json::array()}};
    json a = assertion("perturbed_emp <= e^osc * base_upper", rep.perturbed_emp,
                       rep.factor * rep.base_upper * (1.0 + rep.tolerance), "<=", rep.tolerance,
                       rep.pass);
    if (rep.inconclusive) {
      // Two lower estimates cannot refute the inequality; report only.
      a["pass"] = true;
      a["inconclusive"] = true;
      r["assertions"].push_back(a);
    } else {
      record(ctx, r, a);
    }
    *ctx.err << fmt::format("p={} osc={:.9g} factor={:.9g} base_upper={:.9g} perturbed={:.9g} {}\n",
                            format_p(p), rep.osc, rep.factor, rep.base_upper, rep.perturbed_emp,
                            rep.inconclusive ? "inconclusive" : (rep.pass ? "pass" : "FAIL"));
    ctx.results.push_back(std::move(r));
  }
}

void cmd_check(Context& ctx, bool timings) {
  const std::uint64_t seed = ctx.cfg.rng_seed;
  const std::size_t big = ctx.cfg.instances ? ctx.cfg.instances : 10000;
  const std::size_t small = ctx.cfg.instances ? ctx.cfg.instances : 100;
  const std::vector<SuiteResult> suites = {
      lemma25_suite(big, seed), lemma32_suite(big, seed), lemma45_suite(small, seed),
      lemma44_suite(small, seed), prop42_suite(small, seed)};
  for (const SuiteResult& s : suites) {
    json r{{"kind", "suite"},
           {"name", s.name},
           {"trials", s.trials},
           {"violations", s.violations},
           {"worst", s.worst},
           {"tolerance", s.tolerance},
           {"assertions", json::array()}};
    if (timings) r["seconds"] = s.seconds;
    json a = assertion(s.name + " violations == 0", static_cast<double>(s.violations), 0.0, "<=",
                       s.tolerance, s.pass());
    if (!s.pass()) a["first_violation"] = s.first_violation;
    record(ctx, r, a);
    *ctx.err << fmt::format("{}: trials={} violations={} worst={:.3e} tol={:g}\n", s.name,
                            s.trials, s.violations, s.worst, s.tolerance);
    ctx.results.push_back(std::move(r));
  }
}

void cmd_report(Context& ctx) {
  build_measure_for(ctx);
  const SpectralGap g = spectral_gap_eigenpair(Generator(*ctx.mu));
  ctx.results.push_back(json{{"kind", "spectral_gap"},
                             {"lambda1", g.lambda1},
                             {"c_p", g.c_p},
                             {"iterations", g.iterations},
                             {"tolerance", 1e-14},
                             {"assertions", json::array()}});
  std::vector<double> ps = ctx.cfg.p_list;
  std::sort(ps.begin(), ps.end());
  for (double p : ps) {
    if (p > 2.0) {
      ctx.results.push_back(sandwich_json(ctx, sobolev_sandwich(*ctx.mu, make_nu(ctx), p)));
    }
  }
  const TheoremAReport rep = theorem_a_check(*ctx.mu, ps, optimizer_options(ctx.cfg));
  json table = json::array();
  for (const TheoremARow& row : rep.rows) {
    table.push_back(json{{"p", row.p},
                         {"empirical", row.empirical},
                         {"p_times_empirical", row.p_times_empirical},
                         {"cs_upper", row.cs_upper ? json(*row.cs_upper) : json(nullptr)}});
  }
  json r{{"kind", "consistency"},
         {"c_p_exact", rep.c_p_exact},
         {"c_p_empirical", rep.c_p_empirical},
         {"empirical_meaning", kLowerLabel},
         {"rows", table},
         {"assertions", json::array()}};
  for (const ConsistencyAssertion& a : rep.assertions) {
    json j = assertion(a.name, a.value, a.bound, a.relation, a.tolerance, a.pass);
    j["p"] = a.p;
    record(ctx, r, j);
  }
  *ctx.err << fmt::format("C_P={:.9g} (1/lambda1), consistency {}\n", rep.c_p_exact,
                          rep.pass ? "pass" : "FAIL");
  for (const TheoremARow& row : rep.rows) {
    *ctx.err << fmt::format("p={} empirical={:.9g} p*empirical={:.9g}\n", format_p(row.p),
                            row.empirical, row.p_times_empirical);
  }
  ctx.results.push_back(std::move(r));
}

json config_echo(const RunConfig& c) {
  return json{{"measure", c.measure_spec},   {"nu", c.nu_spec},
              {"p", c.p_list},               {"grid_n", c.grid_n},
              {"dt", c.dt},                  {"t_max", c.t_max},
              {"t_step", c.t_step},          {"seeds", c.seeds},
              {"rng_seed", c.rng_seed},      {"max_iter", c.max_iter},
              {"f0", c.f0},                  {"u", c.u},
              {"cs", c.c_s ? json(*c.c_s) : json(nullptr)},
              {"instances", c.instances},    {"deterministic", c.deterministic}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  CLI::App app{"Numerical laboratory for centred Sobolev inequalities on the line", "fil"};
  app.set_version_flag("--version", std::string("fil ") + FIL_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, measure, nu, output, curve, f0, u;
  std::vector<double> ps;
  std::size_t grid_n = 0, instances = 0;
  double dt = 0.0, t_max = 0.0, t_step = 0.0, cs = 0.0;
  int seeds = 0, max_iter = 0;
  std::uint64_t rng_seed = 0;
  bool deterministic = false;

  auto* o_config = app.add_option("--config", config_path, "TOML file with run settings");
  auto* o_measure = app.add_option("--measure", measure, "measure descriptor, e.g. jacobi:n=4");
  auto* o_nu = app.add_option("--nu", nu, "same-as-mu | lebesgue | expr:<n(x)>");
  auto* o_p = app.add_option("--p", ps, "exponent(s) p")->delimiter(',');
  auto* o_grid = app.add_option("--grid-n", grid_n, "number of grid nodes (default 4001)");
  auto* o_dt = app.add_option("--dt", dt, "Crank-Nicolson time step");
  auto* o_tmax = app.add_option("--t-max", t_max, "final time");
  auto* o_tstep = app.add_option("--t-step", t_step, "sampling interval of the decay curve");
  auto* o_seeds = app.add_option("--seeds", seeds, "optimizer starts");
  auto* o_rng = app.add_option("--rng-seed", rng_seed, "random seed");
  auto* o_iter = app.add_option("--max-iter", max_iter, "optimizer iterations per start");
  auto* o_out = app.add_option("--output", output, "JSON report path ('-' for stdout)");
  auto* o_curve = app.add_option("--curve", curve, "decay CSV path (stdout if absent)");
  auto* o_f0 = app.add_option("--f0", f0, "initial datum expression in x");
  auto* o_u = app.add_option("--u", u, "perturbation expression in x");
  auto* o_cs = app.add_option("--cs", cs, "constant used to verify decay");
  auto* o_inst = app.add_option("--instances", instances, "trials per randomized suite");
  auto* o_det = app.add_flag("--deterministic", deterministic, "omit timestamps and timings");

  const char* names[][2] = {
      {"bounds", "Hardy-type two-sided bounds on C_S(p), p > 2"},
      {"empirical", "multi-start lower estimates of C_S(p)"},
      {"gap", "spectral gap lambda1 of the generator"},
      {"decay", "semigroup decay curves and their verification"},
      {"perturb", "bounded perturbation check"},
      {"check", "randomized lemma suites"},
      {"report", "gap, bounds, estimates and consistency checks"}};
  for (auto& n : names) app.add_subcommand(n[0], n[1]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInvalidInput;
  }

  Context ctx;
  ctx.out = &out;
  ctx.err = &err;
  ctx.command = app.get_subcommands().front()->get_name();
  try {
    configure_threads_from_env();
    RunConfig& cfg = ctx.cfg;
    if (o_config->count()) load_config_file(cfg, config_path);
    if (o_measure->count()) cfg.measure_spec = measure;
    if (o_nu->count()) cfg.nu_spec = nu;
    if (o_p->count()) cfg.p_list = ps;
    if (o_grid->count()) cfg.grid_n = grid_n;
    if (o_dt->count()) cfg.dt = dt;
    if (o_tmax->count()) cfg.t_max = t_max;
    if (o_tstep->count()) cfg.t_step = t_step;
    if (o_seeds->count()) cfg.seeds = seeds;
    if (o_rng->count()) cfg.rng_seed = rng_seed;
    if (o_iter->count()) cfg.max_iter = max_iter;
    if (o_out->count()) cfg.output_path = output;
    if (o_curve->count()) cfg.curve_path = curve;
    if (o_f0->count()) cfg.f0 = f0;
    if (o_u->count()) cfg.u = u;
    if (o_cs->count()) cfg.c_s = cs;
    if (o_inst->count()) cfg.instances = instances;
    if (o_det->count()) cfg.deterministic = true;
    cfg.validate();

    const std::string& cmd = ctx.command;
    if (cmd == "bounds") cmd_bounds(ctx);
    else if (cmd == "empirical") cmd_empirical(ctx);
    else if (cmd == "gap") cmd_gap(ctx);
    else if (cmd == "decay") cmd_decay(ctx);
    else if (cmd == "perturb") cmd_perturb(ctx);
    else if (cmd == "check") cmd_check(ctx, !cfg.deterministic);
    else if (cmd == "report") cmd_report(ctx);

    json report{{"tool_version", std::string("fil ") + FIL_VERSION},
                {"command", cmd},
                {"config_echo", config_echo(cfg)},
                {"truncation_note", ctx.mu ? json(ctx.mu->support_note()) : json(nullptr)},
                {"results", ctx.results},
                {"violations", ctx.violations}};
    if (!cfg.deterministic) {
      const std::time_t now = std::time(nullptr);
      char stamp[32];
      std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
      report["timestamp"] = stamp;
      report["runtime_seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }
    const std::string text = report.dump(2) + "\n";
    const bool stdout_taken = cmd == "gap" || (cmd == "decay" && cfg.curve_path.empty());
    if (cfg.output_path == "-" || (cfg.output_path.empty() && !stdout_taken)) {
      out << text;
    } else if (!cfg.output_path.empty()) {
      write_text(cfg.output_path, text);
    }
    if (!ctx.violations.empty()) {
      err << fmt::format("{} assertion(s) failed; see the violations list\n", ctx.violations.size());
      return kExitViolation;
    }
    return kExitPass;
  } catch (const std::invalid_argument& e) {
    // InputError and argument validation from the library.
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitViolation;
  }
}

}  // namespace fil::cli
