// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#include "fracap/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include "fracap/dsl.hpp"
#include "fracap/inequalities.hpp"
#include "fracap/report.hpp"

namespace fracap {

namespace {

PerimeterMethod parse_method(const std::string& m) {
  if (m == "auto") return PerimeterMethod::automatic;
  if (m == "quad" || m == "quadrature") return PerimeterMethod::quadrature;
  if (m == "mc" || m == "monte-carlo") return PerimeterMethod::monte_carlo;
  throw std::invalid_argument("unknown method '" + m + "' (auto|quad|mc)");
}

struct RunState {
  std::vector<Record> records;
  int status = 0;

  void fail_verification() { status = std::max(status, 1); }
  void convergence_trouble() { status = std::max(status, 3); }
};

PerimeterSpec perimeter_spec(const RunConfig& c) {
  PerimeterSpec spec;
  if (c.tol > 0.0) {
    spec.quad.rel_tol = c.tol;
    spec.quad.abs_tol = c.tol * 1e-2;
  }
  spec.mc.samples = c.samples;
  spec.mc.seed = c.seed;
  spec.mc.chunks = c.chunks;
  spec.importance_eps0 = c.mc_eps0;
  spec.workers = c.workers;
  return spec;
}

std::vector<double> alphas_of(const RunConfig& c) {
  if (!c.alpha_grid.empty()) return c.alpha_grid;
  return {c.alpha};
}

Record estimate_record(const Estimate& e) {
  Record r;
  r["value"] = e.value;
  r["error"] = e.error;
  r["method"] = to_string(e.method);
  r["samples"] = e.samples;
  r["seed"] = e.seed;
  return r;
}

void run_constants(const RunConfig& c, RunState& state) {
  const int n = c.n > 0 ? c.n : 1;
  const PerimeterSpec spec = perimeter_spec(c);
  for (double a : alphas_of(c)) {
    AlphaContext ctx(n, a);
    const Estimate p_ball = frac_perimeter(Shape::ball(n, 1.0), ctx,
                                           PerimeterMethod::quadrature, spec);
    Record r;
    r["n"] = n;
    r["alpha"] = a;
    r["omega_n"] = unit_ball_volume(n);
    r["tau_n"] = tau(n);
    r["p_alpha_ball"] = p_ball.value;
    r["kappa"] = kappa(ctx, p_ball.value);
    r["kernel_tail_R1"] = kernel_tail(ctx, 1.0);
    state.records.push_back(std::move(r));
  }
}

void run_perimeter(const RunConfig& c, RunState& state) {
  if (c.shape_dsl.empty()) throw std::invalid_argument("perimeter: --shape is required");
  const Shape s = parse_shape(c.shape_dsl);
  if (c.n > 0 && c.n != s.dim())
    throw std::invalid_argument("perimeter: --n disagrees with the shape dimension");
  const PerimeterSpec spec = perimeter_spec(c);
  const PerimeterMethod method = parse_method(c.method);
  for (double a : alphas_of(c)) {
    AlphaContext ctx(s.dim(), a);
    Record r;
    r["shape"] = c.shape_dsl;
    r["n"] = s.dim();
    r["alpha"] = a;
    try {
      const Estimate e = frac_perimeter(s, ctx, method, spec);
      r.update(estimate_record(e));
    } catch (const ConvergenceFailure& cf) {
      r.update(estimate_record(cf.best));
      r["converged"] = false;
      state.convergence_trouble();
    }
    state.records.push_back(std::move(r));
  }
}

void run_besov(const RunConfig& c, RunState& state) {
  if (c.function_dsl.empty()) throw std::invalid_argument("besov: --function is required");
  const SampledFunction f = parse_function(c.function_dsl);
  QuadratureSpec quad{1e-10, 1e-8, 4000, 0.0};
  if (c.tol > 0.0) {
    quad.rel_tol = c.tol;
    quad.abs_tol = c.tol * 1e-2;
  }
  for (double a : alphas_of(c)) {
    AlphaContext ctx(f.dim(), a);
    Record r;
    r["function"] = c.function_dsl;
    r["n"] = f.dim();
    r["alpha"] = a;
    r["l1"] = f.l1_norm();
    r["tv"] = f.total_variation();
    try {
      const Estimate e = besov_seminorm(f, ctx, quad);
      r.update(estimate_record(e));
      if (c.coarea_check) {
        const Estimate co = coarea_decompose(f, ctx);
        r["coarea_value"] = co.value;
        r["coarea_error"] = co.error;
        r["routes_agree"] =
            std::abs(co.value - e.value) <= co.error + e.error + 1e-12;
      }
    } catch (const ConvergenceFailure& cf) {
      r.update(estimate_record(cf.best));
      r["converged"] = false;
      state.convergence_trouble();
    }
    state.records.push_back(std::move(r));
  }
}

void run_capacity(const RunConfig& c, RunState& state) {
  if (c.shape_dsl.empty()) throw std::invalid_argument("capacity: --shape is required");
  const Shape s = parse_shape(c.shape_dsl);
  SearchSpec spec;
  spec.perimeter = perimeter_spec(c);
  spec.method = parse_method(c.method);
  for (double a : alphas_of(c)) {
    AlphaContext ctx(s.dim(), a);
    const CapacityBracket b = capacity_bracket(s, ctx, spec);
    Record r;
    r["shape"] = c.shape_dsl;
    r["n"] = b.n;
    r["alpha"] = b.alpha;
    r["lower"] = b.lower;
    r["upper"] = b.upper;
    r["upper_error"] = b.upper_error;
    r["witness"] = b.witness;
    r["gap"] = b.gap();
    r["seed"] = c.seed;
    state.records.push_back(std::move(r));
  }
}

Record report_record(const DeficitReport& d, const RunConfig& c) {
  Record r;
  r["id"] = d.inequality_id;
  r["lhs"] = d.lhs;
  r["rhs"] = d.rhs;
  r["ratio"] = d.ratio;
  r["slack"] = d.slack;
  r["tol"] = d.tol;
  r["status"] = d.pass ? "pass" : "fail";
  r["seed"] = c.seed;
  return r;
}

void run_verify(const RunConfig& c, RunState& state) {
  const bool want_all = c.ineq == "all";
  auto wants = [&](const std::string& id) { return want_all || c.ineq == id; };

  std::optional<Shape> shape;
  if (!c.shape_dsl.empty()) shape = parse_shape(c.shape_dsl);
  std::optional<SampledFunction> fn;
  if (!c.function_dsl.empty()) fn = parse_function(c.function_dsl);
  if (!shape && !fn)
    throw std::invalid_argument("verify: provide --shape and/or --function");

  VerifySpec vspec;
  vspec.capacity.perimeter = perimeter_spec(c);
  vspec.capacity.method = parse_method(c.method);
  if (c.tol > 0.0) vspec.base_tol = c.tol;

  for (double a : alphas_of(c)) {
    std::vector<DeficitReport> reports;
    if (fn) {
      AlphaContext ctx(fn->dim(), a);
      const double kap = sharp_kappa(ctx, vspec.capacity.perimeter);
      if (wants("eq1")) reports.push_back(verify_cap_strong_sobolev(*fn, ctx, kap, vspec));
      if (wants("eq3")) reports.push_back(verify_truncation(*fn, ctx, vspec));
      if (wants("sobolev")) reports.push_back(verify_sobolev(*fn, ctx, kap, vspec));
    }
    if (shape) {
      AlphaContext ctx(shape->dim(), a);
      const double kap = sharp_kappa(ctx, vspec.capacity.perimeter);
      if (wants("eq2"))
        reports.push_back(verify_isocapacitary(*shape, ctx, kap, vspec, "eq2"));
      if (wants("isocapacitary") && want_all == false)
        reports.push_back(verify_isocapacitary(*shape, ctx, kap, vspec));
      if (wants("eq4")) reports.push_back(verify_eq4(*shape, ctx, vspec));
      if (wants("isoperimetric") || wants("isoper"))
        reports.push_back(verify_isoperimetric(*shape, ctx, kap, vspec));
    }
    if (reports.empty())
      throw std::invalid_argument("verify: inequality '" + c.ineq +
                                  "' does not match the provided inputs");
    for (const auto& d : reports) {
      Record r = report_record(d, c);
      r["alpha"] = a;
      if (shape) r["shape"] = c.shape_dsl;
      if (fn) r["function"] = c.function_dsl;
      if (!d.pass) state.fail_verification();
      state.records.push_back(std::move(r));
    }
  }
}

Record scan_record(const LimitScanResult& scan, const std::string& kind, int end) {
  Record r;
  r["kind"] = kind;
  r["end"] = end;
  r["alphas"] = scan.alphas;
  r["scaled_values"] = scan.scaled_values;
  r["extrapolated"] = scan.extrapolated;
  r["target"] = scan.target;
  r["rel_err"] = scan.rel_err;
  return r;
}

void run_limits(const RunConfig& c, RunState& state) {
  if (c.shape_dsl.empty()) throw std::invalid_argument("limits: --shape is required");
  const Shape s = parse_shape(c.shape_dsl);
  const PerimeterSpec spec = perimeter_spec(c);
  SearchSpec cap_spec;
  cap_spec.perimeter = spec;

  const bool do0 = c.end == 0 || c.end == -1;
  const bool do1 = c.end == 1 || c.end == -1;
  std::vector<double> grid = c.alpha_grid;
  if (do0) {
    state.records.push_back(
        scan_record(limit_alpha0_check(s, c.end == 0 ? grid : std::vector<double>{}, spec),
                    "perimeter", 0));
  }
  if (do1) {
    state.records.push_back(
        scan_record(limit_alpha1_check(s, c.end == 1 ? grid : std::vector<double>{}, spec),
                    "perimeter", 1));
  }
  const CapacityLimits cl = capacity_limit_checks(
      s, do0 && c.end == 0 ? grid : std::vector<double>{},
      do1 && c.end == 1 ? grid : std::vector<double>{}, cap_spec);
  if (do0) state.records.push_back(scan_record(cl.alpha0, "capacity", 0));
  if (do1) state.records.push_back(scan_record(cl.alpha1, "capacity", 1));
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  RunState state;
  try {
    if (config.output != "json" && config.output != "csv")
      throw std::invalid_argument("output must be json or csv");
    if (config.subcommand == "constants")
      run_constants(config, state);
    else if (config.subcommand == "perimeter")
      run_perimeter(config, state);
    else if (config.subcommand == "besov")
      run_besov(config, state);
    else if (config.subcommand == "capacity")
      run_capacity(config, state);
    else if (config.subcommand == "verify")
      run_verify(config, state);
    else if (config.subcommand == "limits")
      run_limits(config, state);
    else
      throw std::invalid_argument("unknown subcommand '" + config.subcommand + "'");
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceFailure& e) {
    err << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const std::string text = config.output == "json" ? to_json_string(state.records)
                                                   : to_csv_string(state.records);
  if (config.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(config.out_path);
    if (!file) {
      err << "error: cannot write " << config.out_path << "\n";
      return 2;
    }
    file << text;
  }
  return state.status;
}

}  // namespace fracap
