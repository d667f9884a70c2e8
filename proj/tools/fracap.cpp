// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracap/cli.hpp"

namespace {

// "a:b:steps" -> inclusive linspace
std::vector<double> parse_alpha_grid(const std::string& text) {
  double a = 0, b = 0;
  int steps = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d", &a, &b, &steps) != 3 || steps < 1)
    throw CLI::ValidationError("--alpha-grid expects a:b:steps");
  std::vector<double> grid;
  for (int i = 0; i < steps; ++i)
    grid.push_back(steps == 1 ? a : a + (b - a) * i / (steps - 1));
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional perimeters, Besov seminorms, and capacity brackets"};
  app.require_subcommand(1);

  fracap::RunConfig config;
  if (const char* env_seed = std::getenv("FRACAP_SEED")) config.seed = std::strtoull(env_seed, nullptr, 10);

  std::string alpha_grid_text;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", config.n, "dimension (derived from inputs when omitted)");
    sub->add_option("--alpha", config.alpha, "order in (0,1)");
    sub->add_option("--alpha-grid", alpha_grid_text, "a:b:steps inclusive grid");
    sub->add_option("--method", config.method, "auto|quad|mc");
    sub->add_option("--samples", config.samples, "Monte Carlo samples");
    sub->add_option("--seed", config.seed, "Monte Carlo seed (default $FRACAP_SEED or 0)");
    sub->add_option("--chunks", config.chunks, "Monte Carlo substream count");
    sub->add_option("--workers", config.workers, "worker threads (0: serial)");
    sub->add_option("--tol", config.tol, "quadrature/verification tolerance");
    sub->add_option("--mc-eps0", config.mc_eps0, "importance-sampling exponent offset");
    sub->add_option("--output", config.output, "json|csv");
    sub->add_option("--out", config.out_path, "write the report to a file");
  };

  auto* constants = app.add_subcommand("constants", "omega_n, tau_n, kappa tables");
  add_common(constants);

  auto* perimeter = app.add_subcommand("perimeter", "fractional alpha-perimeter of a shape");
  perimeter->add_option("--shape", config.shape_dsl, "shape DSL")->required();
  add_common(perimeter);

  auto* besov = app.add_subcommand("besov", "Besov seminorm of a grid function");
  besov->add_option("--function", config.function_dsl, "function DSL or file:<path>")->required();
  besov->add_flag("--coarea", config.coarea_check, "also run the coarea route");
  add_common(besov);

  auto* capacity = app.add_subcommand("capacity", "two-sided capacity bracket");
  capacity->add_option("--shape", config.shape_dsl, "shape DSL")->required();
  add_common(capacity);

  auto* verify = app.add_subcommand("verify", "verify the sharp inequalities");
  verify->add_option("--shape", config.shape_dsl, "shape DSL");
  verify->add_option("--function", config.function_dsl, "function DSL");
  verify->add_option("--ineq", config.ineq,
                     "eq1|eq2|eq3|eq4|sobolev|isocapacitary|isoperimetric|all");
  bool csv_flag = false;
  verify->add_flag("--csv", csv_flag, "shorthand for --output csv");
  add_common(verify);

  auto* limits = app.add_subcommand("limits", "alpha->0 and alpha->1 scans");
  limits->add_option("--shape", config.shape_dsl, "shape DSL")->required();
  limits->add_option("--end", config.end, "0, 1, or omit for both");
  add_common(limits);

  CLI11_PARSE(app, argc, argv);

  config.subcommand = app.get_subcommands().front()->get_name();
  if (csv_flag) config.output = "csv";
  if (!alpha_grid_text.empty()) {
    try {
      config.alpha_grid = parse_alpha_grid(alpha_grid_text);
    } catch (const CLI::ValidationError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return fracap::run(config, std::cout, std::cerr);
}
