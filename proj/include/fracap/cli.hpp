// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FRACAP_CLI_HPP
#define FRACAP_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fracap {

// Everything a run needs, assembled by the command-line front end (or by
// tests directly). All randomness in a run derives from `seed`.
struct RunConfig {
  std::string subcommand;  // constants | perimeter | besov | capacity | verify | limits
  std::string shape_dsl;
  std::string function_dsl;
  int n = 0;  // 0: derive from the shape/function
  double alpha = 0.5;
  std::vector<double> alpha_grid;  // overrides alpha when non-empty
  std::string method = "auto";     // auto | quad | mc
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t chunks = 64;
  int workers = 0;
  double tol = 0.0;  // 0: module defaults
  double mc_eps0 = 0.1;
  std::string ineq = "all";
  int end = -1;  // limits: 0, 1, or -1 for both
  bool coarea_check = false;
  std::string output = "json";  // json | csv
  std::string out_path;         // empty: stdout
};

// exit status: 0 success / all verifications pass, 1 verification failure,
// 2 configuration or parse error, 3 convergence failure (best estimates
// still emitted)
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace fracap

#endif
