// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FRACAP_NUMERICS_HPP
#define FRACAP_NUMERICS_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "fracap/estimate.hpp"

namespace fracap {

// ---------------------------------------------------------------------------
// quadrature

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
  // Integrand behaves like (t-a)^gamma near the left endpoint; gamma in
  // (-1, inf), 0 for regular integrands.
  double endpoint_exponent = 0.0;

  void validate() const;
};

// Adaptive Gauss-Kronrod (7,15) on (a,b). When endpoint_exponent < 0 the mesh
// is geometrically graded toward a and the terminal sliver is bounded by the
// power model. Throws ConvergenceFailure (carrying the best estimate) if the
// subdivision budget runs out.
Estimate integrate_1d(const std::function<double(double)>& f, double a, double b,
                      const QuadratureSpec& spec = {});

// Integral of (t-a)^gamma * g(t) over (a,b) with g regular. Uses the exact
// power substitution t = a + (b-a) u^{1/(1+gamma)}, which removes the
// singularity entirely; g must be evaluable down to t = a (limit value).
// This is the production path for kernels t^{-alpha} with alpha close to 1,
// where graded meshes alone would underflow.
Estimate integrate_power_left(const std::function<double(double)>& g, double gamma,
                              double a, double b, const QuadratureSpec& spec = {});

// Gauss-Legendre rule on [-1,1]; nodes ascending. Cached per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order);

// ---------------------------------------------------------------------------
// Monte Carlo

struct McSpec {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t chunks = 64;

  void validate() const;
};

// Counter-based generator (Philox2x64-10) keyed by (seed, chunk). Draws are a
// pure function of (sample index, lane), so results do not depend on how
// chunks are distributed over workers.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t chunk);

  // lane-th U[0,1) variate of the given sample; lanes 0..127 available.
  double uniform(std::uint64_t sample, unsigned lane) const;
  // standard normal via Box-Muller; consumes two uniform lanes internally,
  // normal lane L maps to uniform lanes (64+2L, 64+2L+1).
  double normal(std::uint64_t sample, unsigned lane) const;

  std::uint64_t raw(std::uint64_t c0, std::uint64_t c1) const;

 private:
  std::uint64_t key_;
};

struct SamplePoint {
  double x[16];
  int dim = 0;
};

using Sampler = std::function<SamplePoint(const CounterRng&, std::uint64_t)>;
using Integrand = std::function<double(const SamplePoint&)>;

// Sample mean with one-standard-error estimate. Bit-identical for fixed
// (seed, samples, chunks) regardless of worker count: chunks own disjoint
// counter substreams and partial sums merge in chunk order.
Estimate mc_mean(const Sampler& sampler, const Integrand& integrand, const McSpec& spec,
                 int workers = 0);

// ---------------------------------------------------------------------------
// limit extrapolation

struct LimitScanResult {
  std::vector<double> alphas;
  std::vector<double> scaled_values;
  double extrapolated = 0.0;
  double target = 0.0;
  double rel_err = 0.0;
};

// Least-squares affine fit of value against alpha, evaluated at the limit
// `end` (0 or 1). Needs at least 3 points.
double extrapolate_limit(const std::vector<std::pair<double, double>>& points, int end);

// End inferred from the side of (0,1) the points crowd toward.
double extrapolate_limit(const std::vector<std::pair<double, double>>& points);

}  // namespace fracap

#endif
