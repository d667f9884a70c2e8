// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FRACAP_INEQUALITIES_HPP
#define FRACAP_INEQUALITIES_HPP

#include <string>
#include <vector>

#include "fracap/besov.hpp"
#include "fracap/capacity.hpp"

namespace fracap {

// Verification record for one inequality instance: pass iff
// lhs <= rhs * (1 + tol), with tol the base tolerance widened by the
// estimators' error budgets.
struct DeficitReport {
  std::string inequality_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs
  double slack = 0.0;  // rhs - lhs
  double tol = 0.0;
  bool pass = false;
};

DeficitReport make_report(const std::string& id, const Estimate& lhs, const Estimate& rhs,
                          double base_tol = 1e-6);

struct VerifySpec {
  QuadratureSpec besov_quad{1e-10, 1e-8, 4000, 0.0};
  SearchSpec capacity;
  int t_nodes = 64;
  std::size_t exact_level_limit = 8192;
  double base_tol = 1e-6;
};

// ||f||_{n/(n-alpha)} <= kappa ||f||  (sharp Sobolev)
DeficitReport verify_sobolev(const SampledFunction& f, const AlphaContext& ctx,
                             double kappa_value, const VerifySpec& spec = {});

// V(E)^{(n-alpha)/n} <= 2 kappa P_alpha(E)
DeficitReport verify_isoperimetric(const Shape& E, const AlphaContext& ctx, double kappa_value,
                                   const VerifySpec& spec = {});

// V(O)^{(n-alpha)/n} <= kappa cap(closure O); id "eq2" or "isocapacitary"
DeficitReport verify_isocapacitary(const Shape& O, const AlphaContext& ctx, double kappa_value,
                                   const VerifySpec& spec = {}, const std::string& id = "isocapacitary");

// cap(closure O) <= 2 P_alpha(O)
DeficitReport verify_eq4(const Shape& O, const AlphaContext& ctx, const VerifySpec& spec = {});

// int_0^infty cap({|f| >= t})^q d(t^q) with q = n/(n-alpha); the capacity of
// each superlevel set is evaluated through the upper-bound pipeline.
Estimate capacity_level_integral(const SampledFunction& f, const AlphaContext& ctx,
                                 const VerifySpec& spec = {});

// ||f||_q <= kappa (int cap^q dt^q)^{1/q}   (eq. 1)
DeficitReport verify_cap_strong_sobolev(const SampledFunction& f, const AlphaContext& ctx,
                                        double kappa_value, const VerifySpec& spec = {});

// (int cap^q dt^q)^{1/q} <= ||f||            (eq. 3)
DeficitReport verify_truncation(const SampledFunction& f, const AlphaContext& ctx,
                                const VerifySpec& spec = {});

// eq. 1 then eq. 3 then the composed Sobolev verdict, on the same f
std::vector<DeficitReport> verify_chain(const SampledFunction& f, const AlphaContext& ctx,
                                        double kappa_value, const VerifySpec& spec = {});

// |1 - V(B^n)^{(n-alpha)/n} / (kappa * cap(B^n))|: how well the capacity
// pipeline reproduces the extremal ball. Monte Carlo assists for n >= 3.
double sharpness_gap(const AlphaContext& ctx, const VerifySpec& spec = {});

}  // namespace fracap

#endif
