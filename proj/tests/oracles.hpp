// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0
//
// Independent oracles for the test suite: closed forms derived by hand and
// brute-force routes that never touch the library's production integrators.

#ifndef FRACAP_TESTS_ORACLES_HPP
#define FRACAP_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <numbers>

namespace oracles {

// P_alpha((0,1)) by the hand antiderivative of the inner kernel integral:
// for x in (0,1), int_{E^c} |x-y|^{-1-a} dy = (x^{-a} + (1-x)^{-a}) / a,
// and F(x) = (x^{1-a} - (1-x)^{1-a}) / (1-a) is an antiderivative of the sum.
inline double interval01_perimeter(double alpha) {
  auto F = [alpha](double x) {
    return (std::pow(x, 1.0 - alpha) - std::pow(1.0 - x, 1.0 - alpha)) / (1.0 - alpha);
  };
  return (F(1.0) - F(0.0)) / alpha;
}

// scaling: P_alpha(r E) = r^{n-alpha} P_alpha(E) in n = 1
inline double interval_perimeter(double alpha, double length) {
  return std::pow(length, 1.0 - alpha) * interval01_perimeter(alpha);
}

// coarea closed form for the tent max(0, 1-|x|):
// ||f|| = 2 int_0^1 P_a((-(1-t), 1-t)) dt = 2^{3-a} / (a (1-a) (2-a))
inline double tent_seminorm(double alpha) {
  return std::pow(2.0, 3.0 - alpha) / (alpha * (1.0 - alpha) * (2.0 - alpha));
}

// unit-disk lens area at center distance d (elementary geometry)
inline double disk_lens_area(double d) {
  if (d >= 2.0) return 0.0;
  return 2.0 * std::acos(0.5 * d) - 0.5 * d * std::sqrt(4.0 - d * d);
}

// composite Simpson on a uniform mesh (brute-force quadrature oracle)
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// tau_n by direct quadrature of |cos theta| over the sphere, using only the
// closed-form surface measure of S^{n-2} (frozen small-n values)
inline double tau_by_quadrature(int n) {
  if (n == 1) return 2.0;  // two-point sphere, counting measure
  // |S^{m}| for m = n-2: frozen closed forms up to n = 8
  static const double sphere_surface[] = {2.0,
                                          2.0 * std::numbers::pi,
                                          4.0 * std::numbers::pi,
                                          2.0 * std::numbers::pi * std::numbers::pi,
                                          8.0 * std::numbers::pi * std::numbers::pi / 3.0,
                                          std::pow(std::numbers::pi, 3),
                                          16.0 * std::pow(std::numbers::pi, 3) / 15.0};
  const double area_sn2 = sphere_surface[n - 2];
  auto integrand = [n](double th) {
    return std::abs(std::cos(th)) * std::pow(std::sin(th), n - 2);
  };
  return area_sn2 * simpson(integrand, 0.0, std::numbers::pi, 40000);
}

// exact unit-ball volumes, hand closed forms up to n = 8
inline double omega_exact(int n) {
  constexpr double pi = std::numbers::pi;
  switch (n) {
    case 0: return 1.0;
    case 1: return 2.0;
    case 2: return pi;
    case 3: return 4.0 * pi / 3.0;
    case 4: return pi * pi / 2.0;
    case 5: return 8.0 * pi * pi / 15.0;
    case 6: return pi * pi * pi / 6.0;
    case 7: return 16.0 * std::pow(pi, 3) / 105.0;
    case 8: return std::pow(pi, 4) / 24.0;
    default: return -1.0;
  }
}

}  // namespace oracles

#endif
