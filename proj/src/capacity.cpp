// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#include "fracap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fracap {

namespace {

void check_admissible(const Shape& K) {
  if (K.is_empty() || !(K.volume().value > 0.0))
    throw std::invalid_argument("capacity: needs a shape with positive volume");
}

Shape dilate_about_centroid(const Shape& K, double factor) {
  const Point c = K.centroid();
  Point minus_c(c.size()), plus_c = c;
  for (std::size_t d = 0; d < c.size(); ++d) minus_c[d] = -c[d];
  return translate(scale(translate(K, minus_c), factor), plus_c);
}

// rasterized open neighborhood {dist(x,K) < s}, cells covering it entirely
Shape rasterized_neighborhood(const Shape& K, double s, int cells_per_axis) {
  const int n = K.dim();
  const BoxGeom bb = K.bounding_box();
  GridMeta meta;
  meta.origin.resize(n);
  meta.spacing.resize(n);
  meta.extents.resize(n);
  std::size_t count = 1;
  for (int d = 0; d < n; ++d) {
    const double lo = bb.lo[d] - 2.0 * s;
    const double hi = bb.hi[d] + 2.0 * s;
    meta.origin[d] = lo;
    meta.extents[d] = cells_per_axis;
    meta.spacing[d] = (hi - lo) / cells_per_axis;
    count *= static_cast<std::size_t>(cells_per_axis);
  }
  double rcell = 0.0;
  for (int d = 0; d < n; ++d) rcell += meta.spacing[d] * meta.spacing[d];
  rcell = 0.5 * std::sqrt(rcell);
  meta.mask.assign(count, 0);
  std::vector<int> idx(n, 0);
  Point x(n);
  bool any = false;
  for (std::size_t lin = 0; lin < count; ++lin) {
    for (int d = 0; d < n; ++d) x[d] = meta.origin[d] + (idx[d] + 0.5) * meta.spacing[d];
    if (K.distance(x) < s + rcell) {
      meta.mask[lin] = 1;
      any = true;
    }
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[d] < meta.extents[d]) break;
      idx[d] = 0;
    }
  }
  if (!any) throw std::invalid_argument("capacity: neighborhood rasterization came up empty");
  return Shape::grid_union(std::move(meta));
}

struct GoldenResult {
  double parameter;
  double value;
};

// golden-section minimization on [lo, hi]; the best of all evaluated points
// (including both endpoints) is returned, so monotone objectives resolve to
// an endpoint exactly.
GoldenResult golden_min(const std::function<double(double)>& f, double lo, double hi,
                        int iterations) {
  constexpr double inv_phi = 0.6180339887498949;
  GoldenResult best{lo, f(lo)};
  auto consider = [&](double s, double v) {
    if (v < best.value) best = {s, v};
  };
  consider(hi, f(hi));
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  consider(c, fc);
  consider(d, fd);
  for (int i = 0; i < iterations; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
  return best;
}

}  // namespace

FamilyResult capacity_upper(const Shape& K, const AlphaContext& ctx, CapacityFamily family,
                            const SearchSpec& spec) {
  check_admissible(K);
  if (K.dim() != ctx.n) throw std::invalid_argument("capacity_upper: dimension mismatch");

  FamilyResult out;
  std::ostringstream witness;

  if (family == CapacityFamily::dilates) {
    // P_alpha((1+s)K) = (1+s)^{n-alpha} P_alpha(K): one honest evaluation of
    // the base shape, the exact scaling law along the family.
    const Estimate base = frac_perimeter(K, ctx, spec.method, spec.perimeter);
    const double expo = ctx.n - ctx.alpha;
    auto objective = [&](double s) { return std::pow(1.0 + s, expo) * base.value; };
    const GoldenResult best = golden_min(objective, 0.0, spec.s_max, spec.iterations);
    const double scale_best = std::pow(1.0 + best.parameter, expo);
    out.value = Estimate{2.0 * best.value, 2.0 * scale_best * base.error, base.method,
                         base.samples, base.seed};
    out.parameter = best.parameter;
    witness << "dilates:s=" << best.parameter;
  } else {
    const int cells = spec.neighborhood_cells;
    double rcell = K.diameter_bound() / cells;  // coarse scale estimate
    const double s_min = 2.0 * rcell * std::sqrt(double(ctx.n));
    const double s_hi = std::max(spec.s_max, 2.0 * s_min);
    double best_err = 0.0;
    auto objective = [&](double s) {
      Shape rasterized = rasterized_neighborhood(K, s, cells);
      const Estimate p = frac_perimeter(rasterized, ctx, spec.method, spec.perimeter);
      best_err = p.error;
      return p.value;
    };
    const GoldenResult best =
        golden_min(objective, s_min, s_hi, std::min(spec.iterations, 16));
    out.value = Estimate{2.0 * best.value, 2.0 * best_err, Method::quadrature, 0, 0};
    out.parameter = best.parameter;
    witness << "neighborhoods:s=" << best.parameter;
  }
  if (!K.is_convex()) witness << ",family-restricted";
  out.witness = witness.str();
  return out;
}

double capacity_lower(const Shape& K, const AlphaContext& ctx, double kappa_value) {
  check_admissible(K);
  if (!(kappa_value > 0.0)) throw std::invalid_argument("capacity_lower: kappa must be positive");
  const double v = K.volume().value;
  return std::pow(v, (ctx.n - ctx.alpha) / ctx.n) / kappa_value;
}

CapacityBracket capacity_bracket(const Shape& K, const AlphaContext& ctx,
                                 const SearchSpec& spec) {
  const double kappa_value = sharp_kappa(ctx, spec.perimeter);
  // the s = 0 dilate (the set itself) is always an admissible containing
  // set, so the dilate bound is valid for any K; for non-convex shapes the
  // rasterized neighborhoods may still improve on it
  FamilyResult upper = capacity_upper(K, ctx, CapacityFamily::dilates, spec);
  if (!K.is_convex() && !std::holds_alternative<IndicatorGeom>(K.variant())) {
    const FamilyResult nb = capacity_upper(K, ctx, CapacityFamily::neighborhoods, spec);
    if (nb.value.value < upper.value.value) upper = nb;
  }
  CapacityBracket b;
  b.lower = capacity_lower(K, ctx, kappa_value);
  b.upper = upper.value.value;
  b.upper_error = upper.value.error_budget();
  b.witness = upper.witness;
  b.n = ctx.n;
  b.alpha = ctx.alpha;
  const double tolerance = 1e-9 * b.upper + b.upper_error + 1e-12;
  if (b.lower > b.upper + tolerance)
    throw std::logic_error("capacity_bracket: lower bound exceeded upper bound");
  return b;
}

HomogeneityReport homogeneity_check(const Shape& K, const AlphaContext& ctx,
                                    std::vector<double> factors, const SearchSpec& spec) {
  if (factors.empty()) factors = {0.5, 2.0, 3.0};
  const double expo = ctx.n - ctx.alpha;
  const double base = capacity_upper(K, ctx, CapacityFamily::dilates, spec).value.value;
  HomogeneityReport rep;
  rep.factors = factors;
  for (double r : factors) {
    const double direct =
        capacity_upper(scale(K, r), ctx, CapacityFamily::dilates, spec).value.value;
    const double expected = std::pow(r, expo) * base;
    const double dev = std::abs(direct - expected) / std::abs(expected);
    rep.deviations.push_back(dev);
    rep.max_rel_deviation = std::max(rep.max_rel_deviation, dev);
  }
  return rep;
}

UscReport usc_check(const Shape& K, const AlphaContext& ctx, int j_max, const SearchSpec& spec) {
  if (j_max < 2) throw std::invalid_argument("usc_check: j_max must be >= 2");
  UscReport rep;
  double prev = std::numeric_limits<double>::infinity();
  rep.monotone = true;
  for (int j = 1; j <= j_max; j *= 2) {
    const double s = 1.0 / j;
    const Shape Kj = dilate_about_centroid(K, 1.0 + s);
    const double v = capacity_upper(Kj, ctx, CapacityFamily::dilates, spec).value.value;
    rep.parameters.push_back(s);
    rep.values.push_back(v);
    if (v > prev * (1.0 + 1e-9)) rep.monotone = false;
    prev = v;
  }
  // extrapolate the tail of the decreasing sequence to excess 0
  std::vector<std::pair<double, double>> tail;
  const std::size_t m = rep.parameters.size();
  for (std::size_t i = m >= 3 ? m - 3 : 0; i < m; ++i)
    tail.push_back({rep.parameters[i], rep.values[i]});
  rep.limit_value = tail.size() >= 3 ? extrapolate_limit(tail, 0) : rep.values.back();
  rep.target = capacity_upper(K, ctx, CapacityFamily::dilates, spec).value.value;
  rep.rel_gap = std::abs(rep.limit_value - rep.target) / std::abs(rep.target);
  return rep;
}

double w11_capacity(const Shape& K) {
  check_admissible(K);
  if (!K.is_convex())
    throw UnsupportedOperation("w11_capacity: implemented for convex shapes only");
  return K.classical_perimeter();
}

CapacityLimits capacity_limit_checks(const Shape& K, std::vector<double> grid0,
                                     std::vector<double> grid1, const SearchSpec& spec) {
  check_admissible(K);
  if (grid0.empty()) grid0 = {0.02, 0.01, 0.005};
  if (grid1.empty()) grid1 = {0.98, 0.99, 0.995};
  CapacityLimits lims;

  auto scan = [&](const std::vector<double>& grid, int end, double target) {
    LimitScanResult r;
    std::vector<std::pair<double, double>> points;
    for (double a : grid) {
      AlphaContext actx(K.dim(), a);
      const double cap =
          capacity_upper(K, actx, CapacityFamily::dilates, spec).value.value;
      const double scaled = (end == 0 ? a : 1.0 - a) * cap;
      r.alphas.push_back(a);
      r.scaled_values.push_back(scaled);
      points.push_back({a, scaled});
    }
    r.extrapolated = extrapolate_limit(points, end);
    r.target = target;
    r.rel_err = std::abs(r.extrapolated - target) / std::abs(target);
    return r;
  };

  lims.alpha0 = scan(grid0, 0, 2.0 * sphere_area(K.dim()) * K.volume().value);
  lims.alpha1 = scan(grid1, 1, tau(K.dim()) * K.classical_perimeter());
  return lims;
}

}  // namespace fracap
