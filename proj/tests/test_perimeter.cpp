// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracap/perimeter.hpp"
#include "oracles.hpp"

using namespace fracap;
constexpr double pi = std::numbers::pi;

TEST_CASE("interval perimeter matches the hand antiderivative across alpha") {
  const Shape I = Shape::interval(0, 1);
  for (double a : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    const Estimate p = frac_perimeter(I, AlphaContext(1, a));
    const double truth = oracles::interval01_perimeter(a);
    CHECK(std::abs(p.value - truth) < 1e-8);
    CHECK(std::abs(p.value - truth) <= p.error + 1e-12);
  }
  CHECK(frac_perimeter(I, AlphaContext(1, 0.5)).value == doctest::Approx(8.0).epsilon(1e-10));
}

TEST_CASE("interval (-1,1) at alpha=1/2 equals 8 sqrt 2 by homogeneity") {
  const Estimate p = frac_perimeter(Shape::interval(-1, 1), AlphaContext(1, 0.5));
  CHECK(p.value == doctest::Approx(8.0 * std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("indicator seminorm is exactly twice the perimeter") {
  const Shape I = Shape::interval(0, 1);
  AlphaContext ctx(1, 0.5);
  const double p = frac_perimeter(I, ctx).value;
  CHECK(frac_perimeter_indicator_seminorm(I, ctx).value == doctest::Approx(2.0 * p));
  CHECK(frac_perimeter_indicator_seminorm(I, ctx).value == doctest::Approx(16.0).epsilon(1e-10));
}

TEST_CASE("homogeneity: log P(rE) - log P(E) = (n - alpha) log r") {
  const Shape shapes[] = {Shape::interval(-1, 1), Shape::ball(2, 1.0),
                          Shape::box({0, 0}, {1, 1}), Shape::ball(3, 1.0)};
  for (const auto& s : shapes) {
    AlphaContext ctx(s.dim(), 0.5);
    const double base = frac_perimeter(s, ctx).value;
    for (double r : {0.5, 2.0, 3.0}) {
      const double scaled = frac_perimeter(scale(s, r), ctx).value;
      const double defect =
          std::log(scaled) - std::log(base) - (s.dim() - ctx.alpha) * std::log(r);
      CHECK(std::abs(defect) < 1e-6);
    }
  }
}

TEST_CASE("homogeneity exponent fit over r in {1/2, 2, 3}") {
  const Shape shapes[] = {Shape::interval(-1, 1), Shape::ball(2, 1.0),
                          Shape::box({0, 0}, {1, 1}), Shape::box({0, 0, 0}, {1, 1, 1})};
  for (const auto& s : shapes) {
    AlphaContext ctx(s.dim(), 0.37);
    // least squares slope of log P against log r
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double rs[] = {0.5, 1.0, 2.0, 3.0};
    for (double r : rs) {
      const double x = std::log(r);
      const double y = std::log(frac_perimeter(scale(s, r), ctx).value);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
    CHECK(std::abs(slope - (s.dim() - ctx.alpha)) < 1e-2);
  }
}

TEST_CASE("translation invariance") {
  AlphaContext ctx2(2, 0.6);
  const Shape b = Shape::ball(2, 1.0);
  const double p = frac_perimeter(b, ctx2).value;
  const double q = frac_perimeter(translate(b, {3.5, -1.25}), ctx2).value;
  CHECK(p == doctest::Approx(q).epsilon(1e-12));

  const Shape box = Shape::box({0, 0}, {1, 2});
  CHECK(frac_perimeter(box, ctx2).value ==
        doctest::Approx(frac_perimeter(translate(box, {-7.0, 2.0}), ctx2).value).epsilon(1e-10));
}

TEST_CASE("representation independence: box vs union of halves") {
  AlphaContext ctx(2, 0.5);
  const double whole = frac_perimeter(Shape::box({0, 0}, {1, 1}), ctx).value;
  const Shape halves = Shape::box_union(
      {BoxGeom{{0.0, 0.0}, {0.5, 1.0}}, BoxGeom{{0.5, 0.0}, {1.0, 1.0}}});
  const double split = frac_perimeter(halves, ctx).value;
  CHECK(std::abs(whole - split) < 1e-8);

  // and as a lattice mask
  GridMeta meta;
  meta.origin = {0.0, 0.0};
  meta.spacing = {0.125, 0.125};
  meta.extents = {8, 8};
  meta.mask.assign(64, 1);
  const double lattice = frac_perimeter(Shape::grid_union(meta), ctx).value;
  CHECK(std::abs(whole - lattice) / whole < 1e-6);
}

TEST_CASE("1-D lattice path matches the interval closed form") {
  GridMeta meta;
  meta.origin = {0.0};
  meta.spacing = {1.0 / 128.0};
  meta.extents = {128};
  meta.mask.assign(128, 1);
  for (double a : {0.25, 0.5, 0.9}) {
    const double p = frac_perimeter(Shape::grid_union(meta), AlphaContext(1, a)).value;
    CHECK(p == doctest::Approx(oracles::interval01_perimeter(a)).epsilon(1e-10));
  }
}

TEST_CASE("positivity") {
  const Shape shapes[] = {Shape::interval(0, 0.01), Shape::ball(2, 0.1),
                          Shape::box({0, 0, 0}, {0.2, 0.1, 0.3})};
  for (const auto& s : shapes)
    CHECK(frac_perimeter(s, AlphaContext(s.dim(), 0.5)).value > 0.0);
}

TEST_CASE("quadrature and Monte Carlo agree within 3 sigma") {
  PerimeterSpec spec;
  spec.mc.samples = 300'000;
  spec.mc.seed = 20240809;
  const Shape shapes[] = {Shape::ball(2, 1.0), Shape::box({0, 0}, {1, 1}),
                          Shape::ball(3, 1.0), Shape::box({0, 0, 0}, {1, 1, 1})};
  for (const auto& s : shapes) {
    for (double a : {0.3, 0.7}) {
      AlphaContext ctx(s.dim(), a);
      const Estimate quad = frac_perimeter(s, ctx, PerimeterMethod::quadrature, spec);
      const Estimate mc = frac_perimeter(s, ctx, PerimeterMethod::monte_carlo, spec);
      CHECK(mc.method == Method::monte_carlo);
      CHECK(std::abs(quad.value - mc.value) <= 3.0 * mc.error + quad.error);
    }
  }
}

TEST_CASE("Monte Carlo perimeter is bit-identical across worker counts") {
  PerimeterSpec spec;
  spec.mc.samples = 200'000;
  spec.mc.seed = 99;
  AlphaContext ctx(2, 0.5);
  const Shape b = Shape::ball(2, 1.0);
  spec.workers = 1;
  const double v1 = frac_perimeter(b, ctx, PerimeterMethod::monte_carlo, spec).value;
  spec.workers = 2;
  const double v2 = frac_perimeter(b, ctx, PerimeterMethod::monte_carlo, spec).value;
  spec.workers = 8;
  const double v8 = frac_perimeter(b, ctx, PerimeterMethod::monte_carlo, spec).value;
  CHECK(v1 == v2);
  CHECK(v1 == v8);
}

TEST_CASE("indicator sets: Monte Carlo only") {
  auto inside = [](const double* x, int) { return x[0] * x[0] + x[1] * x[1] <= 1.0; };
  const Shape disk = Shape::indicator(inside, BoxGeom{{-1, -1}, {1, 1}});
  AlphaContext ctx(2, 0.5);
  CHECK_THROWS_AS(frac_perimeter(disk, ctx, PerimeterMethod::quadrature), UnsupportedOperation);

  PerimeterSpec spec;
  spec.mc.samples = 2'000'000;
  spec.mc.seed = 4;
  const Estimate mc = frac_perimeter(disk, ctx, PerimeterMethod::automatic, spec);
  const Estimate quad = frac_perimeter(Shape::ball(2, 1.0), ctx);
  CHECK(std::abs(mc.value - quad.value) <= 3.0 * mc.error + quad.error);
}

TEST_CASE("ball n=4 quadrature against Monte Carlo") {
  AlphaContext ctx(4, 0.5);
  PerimeterSpec spec;
  spec.quad.rel_tol = 1e-8;
  spec.mc.samples = 400'000;
  spec.mc.seed = 17;
  const Estimate quad = frac_perimeter(Shape::ball(4, 1.0), ctx, PerimeterMethod::quadrature, spec);
  const Estimate mc = frac_perimeter(Shape::ball(4, 1.0), ctx, PerimeterMethod::monte_carlo, spec);
  CHECK(std::abs(quad.value - mc.value) <= 3.0 * mc.error + quad.error);
}

TEST_CASE("limit laws for the interval at 1%") {
  const Shape I = Shape::interval(0, 1);
  const LimitScanResult low = limit_alpha0_check(I);
  CHECK(low.target == doctest::Approx(2.0));  // n omega_n V = 2
  CHECK(low.rel_err < 0.01);
  const LimitScanResult high = limit_alpha1_check(I);
  CHECK(high.target == doctest::Approx(2.0));  // tau_1 P / 2 = 2
  CHECK(high.rel_err < 0.01);
}

TEST_CASE("limit scans validate their grids") {
  const Shape I = Shape::interval(0, 1);
  CHECK_THROWS_AS(limit_alpha0_check(I, {0.9, 0.8, 0.7}), std::invalid_argument);
  CHECK_THROWS_AS(limit_alpha1_check(I, {0.1, 0.2, 0.3}), std::invalid_argument);
  CHECK_THROWS_AS(limit_alpha0_check(I, {0.02, 0.01}), std::invalid_argument);
  auto inside = [](const double* x, int) { return std::abs(x[0]) <= 1.0; };
  const Shape ind = Shape::indicator(inside, BoxGeom{{-1}, {1}});
  CHECK_THROWS_AS(limit_alpha1_check(ind), UnsupportedOperation);
}

TEST_CASE("alpha near 1 stays accurate through the power substitution") {
  const Shape I = Shape::interval(0, 1);
  for (double a : {0.98, 0.99, 0.995}) {
    const Estimate p = frac_perimeter(I, AlphaContext(1, a));
    const double truth = oracles::interval01_perimeter(a);
    CHECK(std::abs(p.value - truth) / truth < 1e-10);
  }
}

TEST_CASE("dimension mismatch and empty shapes") {
  CHECK_THROWS_AS(frac_perimeter(Shape::ball(2, 1.0), AlphaContext(3, 0.5)),
                  std::invalid_argument);
  CHECK(frac_perimeter(Shape::empty(2), AlphaContext(2, 0.5)).value == 0.0);
}

TEST_CASE("sharp_kappa reproduces the 1-D closed form") {
  CHECK(sharp_kappa(AlphaContext(1, 0.5)) == doctest::Approx(1.0 / 16.0).epsilon(1e-10));
  for (double a : {0.2, 0.8})
    CHECK(sharp_kappa(AlphaContext(1, a)) ==
          doctest::Approx(a * (1.0 - a) / 4.0).epsilon(1e-9));
}

TEST_CASE("convergence failure carries the best estimate") {
  PerimeterSpec spec;
  spec.quad.abs_tol = 1e-300;
  spec.quad.rel_tol = 1e-300;
  spec.quad.max_subdivisions = 20;
  try {
    frac_perimeter(Shape::ball(2, 1.0), AlphaContext(2, 0.5), PerimeterMethod::quadrature, spec);
    FAIL("expected ConvergenceFailure");
  } catch (const ConvergenceFailure& cf) {
    CHECK(cf.best.value > 0.0);
  }
}

TEST_CASE("limit laws hold for a disconnected box union") {
  const Shape two = Shape::box_union(
      {BoxGeom{{0.0, 0.0}, {1.0, 1.0}}, BoxGeom{{2.0, 0.0}, {3.0, 1.0}}});
  const LimitScanResult hi = limit_alpha1_check(two);
  CHECK(hi.target == doctest::Approx(16.0));  // tau_2 * (4+4) / 2
  CHECK(hi.rel_err < 0.01);
  const LimitScanResult lo = limit_alpha0_check(two);
  CHECK(lo.target == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-12));
  CHECK(lo.rel_err < 0.01);
}
