// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracap/besov.hpp"
#include "fracap/capacity.hpp"
#include "oracles.hpp"

using namespace fracap;
constexpr double pi = std::numbers::pi;

TEST_CASE("interval bracket collapses to 16 sqrt 2") {
  AlphaContext ctx(1, 0.5);
  const CapacityBracket b = capacity_bracket(Shape::interval(-1, 1), ctx);
  const double truth = 16.0 * std::sqrt(2.0);
  CHECK(std::abs(b.lower - truth) / truth < 1e-6);
  CHECK(std::abs(b.upper - truth) / truth < 1e-6);
  CHECK(std::abs(b.upper - b.lower) / b.upper < 1e-6);
  CHECK(b.witness.find("dilates") != std::string::npos);
}

TEST_CASE("ball brackets collapse across alpha") {
  for (double a : {0.3, 0.5, 0.7}) {
    AlphaContext ctx(2, a);
    const CapacityBracket b = capacity_bracket(Shape::ball(2, 1.0), ctx);
    CHECK((b.upper - b.lower) / b.upper < 1e-4);
    CHECK(b.lower <= b.upper * (1.0 + 1e-9) + b.upper_error);
  }
}

TEST_CASE("box bracket has a strict positive gap") {
  AlphaContext ctx(2, 0.5);
  const CapacityBracket b = capacity_bracket(Shape::box({0, 0}, {1, 1}), ctx);
  CHECK(b.lower < b.upper);
  CHECK(b.gap() / b.upper > 1e-3);  // boxes are not extremal
  CHECK(b.lower > 0.0);
}

TEST_CASE("capacity_upper equals twice the perimeter at the dilate optimum") {
  AlphaContext ctx(2, 0.5);
  const Shape ball = Shape::ball(2, 1.0);
  const FamilyResult up = capacity_upper(ball, ctx);
  const double p = frac_perimeter(ball, ctx).value;
  CHECK(up.value.value == doctest::Approx(2.0 * p).epsilon(1e-9));
  CHECK(up.parameter == doctest::Approx(0.0));
}

TEST_CASE("capacity_lower closed form for the interval") {
  AlphaContext ctx(1, 0.5);
  const double kap = 1.0 / 16.0;
  const double low = capacity_lower(Shape::interval(-1, 1), ctx, kap);
  CHECK(low == doctest::Approx(16.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(capacity_lower(Shape::interval(-1, 1), ctx, 0.0), std::invalid_argument);
}

TEST_CASE("scaling moves the bracket by r^{n-alpha}") {
  AlphaContext ctx(1, 0.5);
  const Shape I = Shape::interval(-1, 1);
  const FamilyResult base = capacity_upper(I, ctx);
  const FamilyResult scaled = capacity_upper(scale(I, 2.0), ctx);
  CHECK(scaled.value.value ==
        doctest::Approx(std::pow(2.0, 0.5) * base.value.value).epsilon(1e-9));
}

TEST_CASE("homogeneity_check") {
  AlphaContext ctx1(1, 0.5);
  const HomogeneityReport r1 = homogeneity_check(Shape::interval(-1, 1), ctx1, {0.5, 2.0, 3.0});
  CHECK(r1.max_rel_deviation < 1e-6);

  AlphaContext ctx2(2, 0.5);
  const HomogeneityReport r2 = homogeneity_check(Shape::ball(2, 1.0), ctx2, {0.5, 2.0});
  CHECK(r2.max_rel_deviation < 1e-4);

  const HomogeneityReport r3 = homogeneity_check(Shape::ball(2, 1.0), ctx2, {1.0});
  CHECK(r3.max_rel_deviation < 1e-12);
}

TEST_CASE("monotonicity under nested shapes") {
  AlphaContext ctx(2, 0.5);
  // nested boxes
  const double c1 = capacity_upper(Shape::box({0, 0}, {1, 1}), ctx).value.value;
  const double c2 = capacity_upper(Shape::box({-0.1, -0.1}, {1.2, 1.1}), ctx).value.value;
  CHECK(c1 <= c2 * (1.0 + 1e-9));
  // nested dilates
  const double b1 = capacity_upper(Shape::ball(2, 1.0), ctx).value.value;
  const double b2 = capacity_upper(Shape::ball(2, 1.2), ctx).value.value;
  CHECK(b1 <= b2 * (1.0 + 1e-9));
}

TEST_CASE("upper semicontinuity along shrinking dilates") {
  AlphaContext ctx(1, 0.5);
  const UscReport rep = usc_check(Shape::interval(-1, 1), ctx, 128);
  CHECK(rep.monotone);
  CHECK(rep.rel_gap < 1e-4);
  CHECK(rep.target == doctest::Approx(16.0 * std::sqrt(2.0)).epsilon(1e-9));

  AlphaContext ctx2(2, 0.5);
  const UscReport rep2 = usc_check(Shape::ball(2, 1.0), ctx2, 512);
  CHECK(rep2.monotone);
  CHECK(rep2.rel_gap < 1e-4);
}

TEST_CASE("w11 capacity of convex shapes is the classical perimeter") {
  CHECK(w11_capacity(Shape::interval(-1, 1)) == doctest::Approx(2.0));
  CHECK(w11_capacity(Shape::ball(2, 1.0)) == doctest::Approx(2.0 * pi).epsilon(1e-14));
  CHECK(w11_capacity(Shape::box({0, 0}, {1, 1})) == doctest::Approx(4.0));
  const Shape two = Shape::box_union(
      {BoxGeom{{0.0, 0.0}, {1.0, 1.0}}, BoxGeom{{2.0, 0.0}, {3.0, 1.0}}});
  CHECK_THROWS_AS(w11_capacity(two), UnsupportedOperation);
}

TEST_CASE("capacity limit scans for the interval hit the closed-form targets") {
  const CapacityLimits lims = capacity_limit_checks(Shape::interval(-1, 1));
  // alpha cap -> 2 n omega_n V = 2*2*2 = 8; (1-alpha) cap -> tau_1 P = 4
  CHECK(lims.alpha0.target == doctest::Approx(8.0));
  CHECK(lims.alpha1.target == doctest::Approx(4.0));
  CHECK(lims.alpha0.rel_err < 0.01);
  CHECK(lims.alpha1.rel_err < 0.01);
}

TEST_CASE("cutoff competitors dominate the capacity lower bound") {
  AlphaContext ctx(1, 0.5);
  const Shape I = Shape::interval(-1, 1);
  const double kap = sharp_kappa(ctx);
  const double low = capacity_lower(I, ctx, kap);
  for (double eps : {0.2, 0.1}) {
    const Estimate competitor = besov_seminorm(build_cutoff(I, eps, GridSpec{eps / 16}), ctx);
    CHECK(competitor.value >= low - competitor.error - 1e-6);
  }
}

TEST_CASE("neighborhoods family: valid bound for non-convex unions") {
  AlphaContext ctx(2, 0.5);
  const Shape two = Shape::box_union(
      {BoxGeom{{0.0, 0.0}, {1.0, 1.0}}, BoxGeom{{1.5, 0.0}, {2.5, 1.0}}});
  SearchSpec spec;
  spec.iterations = 8;
  spec.neighborhood_cells = 40;
  const FamilyResult up = capacity_upper(two, ctx, CapacityFamily::neighborhoods, spec);
  CHECK(up.witness.find("neighborhoods") != std::string::npos);
  CHECK(up.witness.find("family-restricted") != std::string::npos);
  const double kap = sharp_kappa(ctx);
  const double low = capacity_lower(two, ctx, kap);
  CHECK(low <= up.value.value * (1.0 + 1e-6) + up.value.error);
  // the rasterized neighborhood cannot beat the set's own perimeter bound by much
  const double own = 2.0 * frac_perimeter(two, ctx).value;
  CHECK(up.value.value > 0.9 * own);
}

TEST_CASE("dilates on a non-convex union still yields a valid family-restricted bound") {
  AlphaContext ctx(2, 0.5);
  const Shape two = Shape::box_union(
      {BoxGeom{{0.0, 0.0}, {1.0, 1.0}}, BoxGeom{{1.5, 0.0}, {2.5, 1.0}}});
  const FamilyResult up = capacity_upper(two, ctx);
  CHECK(up.witness.find("family-restricted") != std::string::npos);
  // s = 0 member is the set itself, so the bound equals 2 P_alpha
  CHECK(up.value.value ==
        doctest::Approx(2.0 * frac_perimeter(two, ctx).value).epsilon(1e-9));
}

TEST_CASE("degenerate inputs are rejected") {
  AlphaContext ctx(2, 0.5);
  CHECK_THROWS_AS(capacity_upper(Shape::empty(2), ctx), std::invalid_argument);
  CHECK_THROWS_AS(capacity_bracket(Shape::empty(2), ctx), std::invalid_argument);
  CHECK_THROWS_AS(capacity_upper(Shape::ball(3, 1.0), ctx), std::invalid_argument);
  CHECK_THROWS_AS(usc_check(Shape::ball(2, 1.0), ctx, 1), std::invalid_argument);
}
