// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#include "fracap/constants.hpp"

#include <cmath>
#include <numbers>

namespace fracap {

double gamma_fn(double x) {
  // Lanczos, g = 7, 9 terms (Godfrey coefficients).
  static const double coef[9] = {
      0.99999999999980993,
      676.5203681218851,
      -1259.1392167224028,
      771.32342877765313,
      -176.61502916214059,
      12.507343278686905,
      -0.13857109526572012,
      9.9843695780195716e-6,
      1.5056327351493116e-7,
  };
  constexpr double pi = std::numbers::pi;
  if (x < 0.5) {
    // reflection
    return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
  }
  x -= 1.0;
  double a = coef[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += coef[i] / (x + i);
  return std::sqrt(2.0 * pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double unit_ball_volume(int n) {
  if (n < 0) throw std::invalid_argument("unit_ball_volume: n must be >= 0");
  if (n == 0) return 1.0;
  constexpr double pi = std::numbers::pi;
  return std::pow(pi, 0.5 * n) / gamma_fn(0.5 * n + 1.0);
}

double sphere_area(int n) {
  if (n < 1) throw std::invalid_argument("sphere_area: n must be >= 1");
  return n * unit_ball_volume(n);
}

double tau(int n) {
  if (n < 1) throw std::invalid_argument("tau: n must be >= 1");
  return 2.0 * unit_ball_volume(n - 1);
}

double kappa(const AlphaContext& ctx, double p_ball) {
  if (!(p_ball > 0.0)) throw std::invalid_argument("kappa: P_alpha(B^n) must be positive");
  const double exponent = (ctx.n - ctx.alpha) / ctx.n;
  return std::pow(unit_ball_volume(ctx.n), exponent) / (2.0 * p_ball);
}

double kernel_tail(const AlphaContext& ctx, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("kernel_tail: radius must be positive");
  return sphere_area(ctx.n) * std::pow(R, -ctx.alpha) / ctx.alpha;
}

}  // namespace fracap
