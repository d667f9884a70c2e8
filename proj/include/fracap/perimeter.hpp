// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FRACAP_PERIMETER_HPP
#define FRACAP_PERIMETER_HPP

#include <functional>
#include <vector>

#include "fracap/constants.hpp"
#include "fracap/geometry.hpp"
#include "fracap/numerics.hpp"

namespace fracap {

enum class PerimeterMethod { automatic, quadrature, monte_carlo };

struct PerimeterSpec {
  QuadratureSpec quad;
  McSpec mc;
  // Monte Carlo offsets are drawn with radial density rho^{-alpha-eps0};
  // clamped internally so the density stays integrable as alpha -> 1.
  double importance_eps0 = 0.1;
  int workers = 0;
};

// P_alpha(E) = int over R^n of (V(E) - g_E(h)) |h|^{-n-alpha} dh, split into a
// near field (graded quadrature or importance-sampled Monte Carlo) and the
// exact far-field tail V(E) * n omega_n R^{-alpha} / alpha.
Estimate frac_perimeter(const Shape& s, const AlphaContext& ctx,
                        PerimeterMethod method = PerimeterMethod::automatic,
                        const PerimeterSpec& spec = {});

// Seminorm of the indicator: exactly 2 P_alpha(E).
Estimate frac_perimeter_indicator_seminorm(const Shape& s, const AlphaContext& ctx,
                                           PerimeterMethod method = PerimeterMethod::automatic,
                                           const PerimeterSpec& spec = {});

// kappa_{n,alpha} with P_alpha(B^n) computed by the quadrature pipeline.
double sharp_kappa(const AlphaContext& ctx, const PerimeterSpec& spec = {});

// alpha -> 0: extrapolates alpha * P_alpha(E) against n omega_n V(E).
LimitScanResult limit_alpha0_check(const Shape& s, std::vector<double> alpha_grid = {},
                                   const PerimeterSpec& spec = {});

// alpha -> 1: extrapolates (1-alpha) * P_alpha(E) against tau_n P(E) / 2.
LimitScanResult limit_alpha1_check(const Shape& s, std::vector<double> alpha_grid = {},
                                   const PerimeterSpec& spec = {});

namespace detail {

// A field on an offset lattice, multilinear between lattice points, equal to
// `asymptote` on and beyond the table boundary. Shared by the perimeter
// (covariogram deficit of lattice masks) and the Besov seminorm (difference
// volumes); both integrate such a field against |h|^{-n-alpha}.
struct LatticeField {
  int n = 0;
  double spacing[16] = {};
  int kmax[16] = {};
  std::function<double(const int*)> corner;
  double asymptote = 0.0;
};

// Integral of field(h) * |h|^{-n-alpha} over all of R^n. Requires
// field(0) = 0 and field == asymptote outside the table box.
Estimate lattice_kernel_integral(const LatticeField& field, const AlphaContext& ctx,
                                 const QuadratureSpec& near_spec);

}  // namespace detail

}  // namespace fracap

#endif
