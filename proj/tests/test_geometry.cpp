// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracap/geometry.hpp"
#include "oracles.hpp"

using namespace fracap;
constexpr double pi = std::numbers::pi;

namespace {

Shape unit_disk_indicator() {
  auto inside = [](const double* x, int) { return x[0] * x[0] + x[1] * x[1] <= 1.0; };
  return Shape::indicator(inside, BoxGeom{{-1.0, -1.0}, {1.0, 1.0}});
}

Shape two_boxes() {
  return Shape::box_union({BoxGeom{{0.0, 0.0}, {1.0, 1.0}}, BoxGeom{{2.0, 0.5}, {3.0, 1.5}}});
}

}  // namespace

TEST_CASE("exact volumes") {
  CHECK(Shape::interval(0, 1).volume().value == doctest::Approx(1.0));
  CHECK(Shape::interval(0, 1).volume().method == Method::exact);
  CHECK(Shape::ball(2, 1.0).volume().value == doctest::Approx(pi).epsilon(1e-14));
  CHECK(Shape::ball(3, 1.0).volume().value == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-14));
  CHECK(Shape::box({0, 0}, {1, 2}).volume().value == doctest::Approx(2.0));
  CHECK(two_boxes().volume().value == doctest::Approx(2.0));
  CHECK(Shape::empty(2).volume().value == 0.0);
}

TEST_CASE("indicator volume by Monte Carlo against the exact disk area") {
  McSpec mc;
  mc.samples = 1'000'000;
  mc.seed = 11;
  const Estimate v = unit_disk_indicator().volume(mc);
  CHECK(v.method == Method::monte_carlo);
  CHECK(v.samples == mc.samples);
  CHECK(std::abs(v.value - pi) <= 3.0 * v.error);
}

TEST_CASE("covariogram closed forms") {
  const Shape I = Shape::interval(0, 1);
  CHECK(I.covariogram({0.5}).value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(I.covariogram({0.0}).value == doctest::Approx(1.0));
  CHECK(I.covariogram({1.5}).value == 0.0);

  // unit disk at |h| = 1: lens area 2 pi/3 - sqrt(3)/2
  const Shape D = Shape::ball(2, 1.0);
  const double lens = 2.0 * pi / 3.0 - std::sqrt(3.0) / 2.0;
  CHECK(D.covariogram({1.0, 0.0}).value == doctest::Approx(lens).epsilon(1e-13));
  CHECK(D.covariogram({0.0, 1.0}).value == doctest::Approx(lens).epsilon(1e-13));
  CHECK(D.covariogram({oracles::disk_lens_area(1.0), 0.0}).value ==
        doctest::Approx(D.covariogram({0.0, oracles::disk_lens_area(1.0)}).value));
  CHECK(D.covariogram({2.5, 0.0}).value == 0.0);
}

TEST_CASE("disk covariogram agrees with Monte Carlo membership sampling") {
  const Shape D = Shape::ball(2, 1.0);
  // brute force: P(x in D and x+h in D) over the bounding box
  McSpec mc;
  mc.samples = 2'000'000;
  mc.seed = 5;
  const Point h = {0.7, 0.4};
  auto sampler = [](const CounterRng& rng, std::uint64_t i) {
    SamplePoint p;
    p.dim = 2;
    p.x[0] = 2.0 * rng.uniform(i, 0) - 1.0;
    p.x[1] = 2.0 * rng.uniform(i, 1) - 1.0;
    return p;
  };
  auto both = [&h](const SamplePoint& p) {
    const double x0 = p.x[0], x1 = p.x[1];
    const bool in1 = x0 * x0 + x1 * x1 <= 1.0;
    const double y0 = x0 + h[0], y1 = x1 + h[1];
    const bool in2 = y0 * y0 + y1 * y1 <= 1.0;
    return in1 && in2 ? 4.0 : 0.0;
  };
  const Estimate brute = mc_mean(sampler, both, mc);
  const double exact = D.covariogram(h).value;
  CHECK(std::abs(brute.value - exact) <= 3.0 * brute.error);
}

TEST_CASE("ball covariogram for n=3 and the n>=4 cap integral") {
  const Shape B3 = Shape::ball(3, 1.0);
  // hand closed form pi d (12 r^2 - d^2) / 12 for the deficit
  const double h3[3] = {0.0, 0.6, 0.0};
  const double deficit = B3.covariogram_deficit(h3);
  CHECK(deficit == doctest::Approx(pi * 0.6 * (12.0 - 0.36) / 12.0).epsilon(1e-13));

  // n = 4 via the cap-volume integral, against Monte Carlo membership
  const Shape B4 = Shape::ball(4, 1.0);
  const double h4[4] = {0.8, 0.0, 0.0, 0.0};
  const double g4 = B4.covariogram({0.8, 0.0, 0.0, 0.0}).value;
  CHECK(B4.covariogram_deficit(h4) ==
        doctest::Approx(B4.volume().value - g4).epsilon(1e-10));
  McSpec mc;
  mc.samples = 2'000'000;
  mc.seed = 3;
  auto sampler4 = [](const CounterRng& rng, std::uint64_t i) {
    SamplePoint p;
    p.dim = 4;
    for (int d = 0; d < 4; ++d) p.x[d] = 2.0 * rng.uniform(i, d) - 1.0;
    return p;
  };
  auto both4 = [](const SamplePoint& p) {
    double r1 = 0.0, r2 = 0.0;
    for (int d = 0; d < 4; ++d) {
      r1 += p.x[d] * p.x[d];
      const double y = p.x[d] + (d == 0 ? 0.8 : 0.0);
      r2 += y * y;
    }
    return r1 <= 1.0 && r2 <= 1.0 ? 16.0 : 0.0;
  };
  const Estimate brute = mc_mean(sampler4, both4, mc);
  CHECK(std::abs(brute.value - g4) <= 3.0 * brute.error);
}

TEST_CASE("covariogram properties: symmetry, bounds, scaling, vanishing") {
  const Shape shapes[] = {Shape::interval(-0.3, 1.7), Shape::ball(2, 1.3),
                          Shape::box({0, 0, 0}, {1, 2, 0.5}), two_boxes()};
  CounterRng rng(2024, 0);
  for (const auto& s : shapes) {
    const int n = s.dim();
    const double vol = s.volume().value;
    const double diam = s.diameter_bound();
    for (int trial = 0; trial < 32; ++trial) {
      Point h(n);
      for (int d = 0; d < n; ++d)
        h[d] = (2.0 * rng.uniform(trial, d) - 1.0) * 1.2 * diam / std::sqrt(double(n));
      Point neg = h;
      for (auto& x : neg) x = -x;
      const double g = s.covariogram(h).value;
      CHECK(g == doctest::Approx(s.covariogram(neg).value).epsilon(1e-12));
      CHECK(g >= 0.0);
      CHECK(g <= vol * (1.0 + 1e-12));

      const double r = 0.5 + 2.0 * rng.uniform(trial, 8);
      Point rh = h;
      for (auto& x : rh) x *= r;
      const double lhs = scale(s, r).covariogram(rh).value;
      const double rhs = std::pow(r, n) * g;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

      Point far(n, 0.0);
      far[0] = 1.01 * diam;
      CHECK(s.covariogram(far).value == 0.0);
    }
  }
}

TEST_CASE("covariogram dimension mismatch") {
  CHECK_THROWS_AS(Shape::ball(2, 1.0).covariogram({1.0}), std::invalid_argument);
}

TEST_CASE("scale and translate") {
  const Shape I = scale(Shape::interval(0, 1), 2.0);
  const auto* ig = std::get_if<IntervalGeom>(&I.variant());
  REQUIRE(ig != nullptr);
  CHECK(ig->a == doctest::Approx(0.0));
  CHECK(ig->b == doctest::Approx(2.0));

  CHECK(scale(Shape::ball(2, 1.0), 3.0).volume().value == doctest::Approx(9.0 * pi).epsilon(1e-14));
  CHECK_THROWS_AS(scale(Shape::ball(2, 1.0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scale(Shape::ball(2, 1.0), -1.0), std::invalid_argument);

  const Shape moved = translate(Shape::box({0, 0}, {1, 2}), {5.0, -1.0});
  CHECK(moved.volume().value == doctest::Approx(2.0));
  CHECK(moved.bounding_box().lo[0] == doctest::Approx(5.0));
  // covariogram is translation invariant
  const Shape b = Shape::box({0, 0}, {1, 2});
  CHECK(moved.covariogram({0.3, 0.4}).value ==
        doctest::Approx(b.covariogram({0.3, 0.4}).value).epsilon(1e-14));
}

TEST_CASE("classical perimeter") {
  CHECK(Shape::interval(-1, 1).classical_perimeter() == doctest::Approx(2.0));
  CHECK(Shape::ball(2, 1.0).classical_perimeter() == doctest::Approx(2.0 * pi).epsilon(1e-14));
  CHECK(Shape::ball(3, 2.0).classical_perimeter() == doctest::Approx(16.0 * pi).epsilon(1e-14));
  CHECK(Shape::box({0, 0}, {1, 1}).classical_perimeter() == doctest::Approx(4.0));
  CHECK(Shape::box({0, 0, 0}, {1, 1, 1}).classical_perimeter() == doctest::Approx(6.0));
  CHECK(two_boxes().classical_perimeter() == doctest::Approx(8.0));

  // touching components are not separated
  Shape touching = Shape::box_union(
      {BoxGeom{{0.0, 0.0}, {1.0, 1.0}}, BoxGeom{{1.0, 0.0}, {2.0, 1.0}}});
  CHECK_THROWS_AS(touching.classical_perimeter(), UnsupportedOperation);
  CHECK_THROWS_AS(unit_disk_indicator().classical_perimeter(), UnsupportedOperation);
}

TEST_CASE("construction rejects degenerate input") {
  CHECK_THROWS_AS(Shape::interval(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Shape::interval(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Shape::ball(Point{0.0, 0.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Shape::box({0, 0}, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Shape::box_union({}), std::invalid_argument);
  // overlapping interiors rejected
  CHECK_THROWS_AS(Shape::box_union({BoxGeom{{0, 0}, {1, 1}}, BoxGeom{{0.5, 0.5}, {2, 2}}}),
                  std::invalid_argument);
  // face-touching boxes are fine (disjoint interiors)
  CHECK_NOTHROW(Shape::box_union({BoxGeom{{0, 0}, {1, 1}}, BoxGeom{{1, 0}, {2, 1}}}));
}

TEST_CASE("distance to closure") {
  CHECK(Shape::interval(0, 1).distance({2.0}) == doctest::Approx(1.0));
  CHECK(Shape::interval(0, 1).distance({0.5}) == doctest::Approx(0.0));
  CHECK(Shape::ball(2, 1.0).distance({2.0, 0.0}) == doctest::Approx(1.0));
  CHECK(Shape::box({0, 0}, {1, 1}).distance({2.0, 2.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(two_boxes().distance({1.5, 0.5}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(unit_disk_indicator().distance({0.0, 0.0}), UnsupportedOperation);
}

TEST_CASE("grid union matches its box-union covariogram") {
  // unit square as a 4x4 lattice mask
  GridMeta meta;
  meta.origin = {0.0, 0.0};
  meta.spacing = {0.25, 0.25};
  meta.extents = {4, 4};
  meta.mask.assign(16, 1);
  const Shape grid = Shape::grid_union(meta);
  const Shape box = Shape::box({0, 0}, {1, 1});
  CHECK(grid.volume().value == doctest::Approx(1.0).epsilon(1e-14));
  for (double hx : {0.05, 0.3, 0.8}) {
    const double g1 = grid.covariogram({hx, 0.13}).value;
    const double g2 = box.covariogram({hx, 0.13}).value;
    CHECK(g1 == doctest::Approx(g2).epsilon(1e-12));
  }
  CHECK(grid.centroid()[0] == doctest::Approx(0.5));
}

TEST_CASE("contains and centroid") {
  CHECK(Shape::ball(2, 1.0).contains({0.5, 0.5}));
  CHECK(!Shape::ball(2, 1.0).contains({0.9, 0.9}));
  CHECK(two_boxes().contains({2.5, 1.0}));
  CHECK(!two_boxes().contains({1.5, 0.5}));
  const Point c = two_boxes().centroid();
  CHECK(c[0] == doctest::Approx(1.5));
  CHECK(c[1] == doctest::Approx(0.75));
}
