// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FRACAP_CONSTANTS_HPP
#define FRACAP_CONSTANTS_HPP

#include <stdexcept>

namespace fracap {

inline constexpr int kMaxDimension = 16;

// The pair (n, alpha) that fixes the kernel |h|^{-n-alpha} everywhere.
struct AlphaContext {
  int n;
  double alpha;

  AlphaContext(int n_, double alpha_) : n(n_), alpha(alpha_) {
    if (n < 1 || n > kMaxDimension)
      throw std::invalid_argument("AlphaContext: dimension must lie in [1,16]");
    if (!(alpha > 0.0) || !(alpha < 1.0))
      throw std::invalid_argument("AlphaContext: alpha must lie in (0,1)");
  }

  // Lebesgue exponent n/(n-alpha) appearing in the sharp inequalities.
  double lebesgue_exponent() const { return n / (n - alpha); }
};

// Gamma via a Lanczos approximation, relative accuracy around 1e-14 on the
// positive half line. Enough that unit-ball volumes never pollute the
// sharp-constant checks.
double gamma_fn(double x);

// omega_n, the volume of the unit ball of R^n.
double unit_ball_volume(int n);

// Surface measure of S^{n-1}, i.e. n * omega_n.
double sphere_area(int n);

// tau_n = int_{S^{n-1}} |cos theta| dsigma = 2 * omega_{n-1}.
// For n = 1 the sphere is the two-point set with counting measure, tau_1 = 2.
double tau(int n);

// Sharp constant kappa_{n,alpha} = omega_n^{(n-alpha)/n} / (2 P_alpha(B^n)),
// with the unit-ball perimeter supplied by the caller.
double kappa(const AlphaContext& ctx, double p_ball);

// Exact far-field integral int_{|h|>R} |h|^{-n-alpha} dh = n omega_n R^{-alpha}/alpha.
double kernel_tail(const AlphaContext& ctx, double R);

}  // namespace fracap

#endif
