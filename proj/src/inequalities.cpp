// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#include "fracap/inequalities.hpp"

#include <algorithm>
#include <cmath>

namespace fracap {

DeficitReport make_report(const std::string& id, const Estimate& lhs, const Estimate& rhs,
                          double base_tol) {
  DeficitReport r;
  r.inequality_id = id;
  r.lhs = lhs.value;
  r.rhs = rhs.value;
  const double scale = std::max(std::abs(rhs.value), 1e-300);
  r.tol = base_tol + (lhs.error_budget() + rhs.error_budget()) / scale;
  r.slack = rhs.value - lhs.value;
  r.ratio = rhs.value != 0.0 ? lhs.value / rhs.value : (lhs.value == 0.0 ? 0.0 : INFINITY);
  r.pass = lhs.value <= rhs.value * (1.0 + r.tol) + 1e-300;
  return r;
}

DeficitReport verify_sobolev(const SampledFunction& f, const AlphaContext& ctx,
                             double kappa_value, const VerifySpec& spec) {
  const double q = ctx.lebesgue_exponent();
  const Estimate lhs = Estimate::exact(lp_norm(f, q));
  const Estimate rhs = kappa_value * besov_seminorm(f, ctx, spec.besov_quad);
  return make_report("sobolev", lhs, rhs, spec.base_tol);
}

DeficitReport verify_isoperimetric(const Shape& E, const AlphaContext& ctx, double kappa_value,
                                   const VerifySpec& spec) {
  const double v = E.volume().value;
  const Estimate lhs = Estimate::exact(std::pow(v, (ctx.n - ctx.alpha) / ctx.n));
  const Estimate rhs =
      2.0 * kappa_value * frac_perimeter(E, ctx, spec.capacity.method, spec.capacity.perimeter);
  return make_report("isoperimetric", lhs, rhs, spec.base_tol);
}

DeficitReport verify_isocapacitary(const Shape& O, const AlphaContext& ctx, double kappa_value,
                                   const VerifySpec& spec, const std::string& id) {
  const double v = O.volume().value;
  const Estimate lhs = Estimate::exact(std::pow(v, (ctx.n - ctx.alpha) / ctx.n));
  const FamilyResult upper = capacity_upper(O, ctx, CapacityFamily::dilates, spec.capacity);
  const Estimate rhs = kappa_value * upper.value;
  return make_report(id, lhs, rhs, spec.base_tol);
}

DeficitReport verify_eq4(const Shape& O, const AlphaContext& ctx, const VerifySpec& spec) {
  const FamilyResult upper = capacity_upper(O, ctx, CapacityFamily::dilates, spec.capacity);
  const Estimate rhs =
      2.0 * frac_perimeter(O, ctx, spec.capacity.method, spec.capacity.perimeter);
  return make_report("eq4", upper.value, rhs, spec.base_tol);
}

Estimate capacity_level_integral(const SampledFunction& f, const AlphaContext& ctx,
                                 const VerifySpec& spec) {
  if (ctx.n != f.dim())
    throw std::invalid_argument("capacity_level_integral: dimension mismatch");
  const double q = ctx.lebesgue_exponent();
  const double fmax = f.max_abs();
  if (fmax == 0.0) return Estimate::exact(0.0);

  auto cap_at = [&](double t) {
    Shape level = superlevel_set(f, t);
    if (level.is_empty()) return Estimate::exact(0.0);
    return capacity_upper(level, ctx, CapacityFamily::dilates, spec.capacity).value;
  };

  const std::vector<double> levels = distinct_levels(f);
  if (f.dim() == 1 && levels.size() <= spec.exact_level_limit) {
    // cap({|f| > t}) is a step function of t: exact Stieltjes sum in t^q
    double sum = 0.0, err = 0.0;
    double prev = 0.0;
    for (double t : levels) {
      const Estimate cap = cap_at(prev + 0.5 * (t - prev));
      const double dq = std::pow(t, q) - std::pow(prev, q);
      sum += std::pow(cap.value, q) * dq;
      if (cap.value > 0.0) err += q * std::pow(cap.value, q - 1.0) * cap.error_budget() * dq;
      prev = t;
    }
    return Estimate{sum, err, Method::quadrature, 0, 0};
  }

  // Gauss nodes in t against the weight q t^{q-1}
  const auto& [nodes, weights] = gauss_legendre(spec.t_nodes);
  double sum = 0.0, err = 0.0;
  std::vector<double> samples(nodes.size());
  double max_gap = 0.0, prev_t = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double t = 0.5 * fmax * (nodes[i] + 1.0);
    max_gap = std::max(max_gap, t - prev_t);
    prev_t = t;
    const Estimate cap = cap_at(t);
    const double integrand = q * std::pow(t, q - 1.0) * std::pow(cap.value, q);
    samples[i] = integrand;
    sum += 0.5 * fmax * weights[i] * integrand;
    if (cap.value > 0.0)
      err += 0.5 * fmax * weights[i] * q * std::pow(t, q - 1.0) * q *
             std::pow(cap.value, q - 1.0) * cap.error_budget();
  }
  max_gap = std::max(max_gap, fmax - prev_t);
  double variation = samples.front() + samples.back();
  for (std::size_t i = 0; i + 1 < samples.size(); ++i)
    variation += std::abs(samples[i + 1] - samples[i]);
  err += 0.5 * variation * max_gap;
  return Estimate{sum, err, Method::quadrature, 0, 0};
}

namespace {

Estimate q_th_root(const Estimate& integral, double q) {
  if (integral.value <= 0.0) return Estimate::exact(0.0);
  Estimate out = integral;
  out.value = std::pow(integral.value, 1.0 / q);
  out.error = integral.error / q * std::pow(integral.value, 1.0 / q - 1.0);
  return out;
}

}  // namespace

DeficitReport verify_cap_strong_sobolev(const SampledFunction& f, const AlphaContext& ctx,
                                        double kappa_value, const VerifySpec& spec) {
  const double q = ctx.lebesgue_exponent();
  const Estimate lhs = Estimate::exact(lp_norm(f, q));
  const Estimate rhs = kappa_value * q_th_root(capacity_level_integral(f, ctx, spec), q);
  return make_report("eq1", lhs, rhs, spec.base_tol);
}

DeficitReport verify_truncation(const SampledFunction& f, const AlphaContext& ctx,
                                const VerifySpec& spec) {
  const double q = ctx.lebesgue_exponent();
  const Estimate lhs = q_th_root(capacity_level_integral(f, ctx, spec), q);
  const Estimate rhs = besov_seminorm(f, ctx, spec.besov_quad);
  return make_report("eq3", lhs, rhs, spec.base_tol);
}

std::vector<DeficitReport> verify_chain(const SampledFunction& f, const AlphaContext& ctx,
                                        double kappa_value, const VerifySpec& spec) {
  std::vector<DeficitReport> reports;
  reports.push_back(verify_cap_strong_sobolev(f, ctx, kappa_value, spec));
  reports.push_back(verify_truncation(f, ctx, spec));
  reports.push_back(verify_sobolev(f, ctx, kappa_value, spec));
  return reports;
}

double sharpness_gap(const AlphaContext& ctx, const VerifySpec& spec) {
  const double kappa_value = sharp_kappa(ctx, spec.capacity.perimeter);
  SearchSpec cap_spec = spec.capacity;
  if (ctx.n >= 3 && cap_spec.method == PerimeterMethod::automatic)
    cap_spec.method = PerimeterMethod::monte_carlo;
  const FamilyResult upper =
      capacity_upper(Shape::ball(ctx.n, 1.0), ctx, CapacityFamily::dilates, cap_spec);
  const double lhs = std::pow(unit_ball_volume(ctx.n), (ctx.n - ctx.alpha) / ctx.n);
  return std::abs(1.0 - lhs / (kappa_value * upper.value.value));
}

}  // namespace fracap
