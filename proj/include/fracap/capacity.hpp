// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FRACAP_CAPACITY_HPP
#define FRACAP_CAPACITY_HPP

#include <string>
#include <vector>

#include "fracap/perimeter.hpp"

namespace fracap {

enum class CapacityFamily { dilates, neighborhoods };

struct SearchSpec {
  double s_max = 1.0;
  int iterations = 40;          // golden-section steps over the family parameter
  int neighborhood_cells = 48;  // rasterization resolution per axis
  PerimeterMethod method = PerimeterMethod::automatic;
  PerimeterSpec perimeter;
};

struct FamilyResult {
  Estimate value;       // 2 * min over the family of P_alpha(O)
  std::string witness;  // family name + parameter achieving the minimum
  double parameter = 0.0;
};

// Upper bound on cap(K) by minimizing 2 P_alpha over a family of containing
// sets. The s=0 dilate is K itself, so the result is always a valid bound;
// for non-convex K the witness is tagged "family-restricted" since the
// family need not approach the true infimum.
FamilyResult capacity_upper(const Shape& K, const AlphaContext& ctx,
                            CapacityFamily family = CapacityFamily::dilates,
                            const SearchSpec& spec = {});

// Isocapacitary lower bound V(K)^{(n-alpha)/n} / kappa.
double capacity_lower(const Shape& K, const AlphaContext& ctx, double kappa_value);

struct CapacityBracket {
  double lower = 0.0;
  double upper = 0.0;
  double upper_error = 0.0;
  std::string witness;
  int n = 0;
  double alpha = 0.0;

  double gap() const { return upper - lower; }
};

CapacityBracket capacity_bracket(const Shape& K, const AlphaContext& ctx,
                                 const SearchSpec& spec = {});

struct HomogeneityReport {
  std::vector<double> factors;
  std::vector<double> deviations;  // relative, per factor
  double max_rel_deviation = 0.0;
};

// cap(rK) against r^{n-alpha} cap(K); both sides through the full pipeline.
HomogeneityReport homogeneity_check(const Shape& K, const AlphaContext& ctx,
                                    std::vector<double> factors, const SearchSpec& spec = {});

struct UscReport {
  std::vector<double> parameters;  // shrinking dilation excesses 1/j
  std::vector<double> values;
  double limit_value = 0.0;
  double target = 0.0;
  double rel_gap = 0.0;
  bool monotone = false;
};

// nested dilates K_j = (1+1/j)K decreasing to K: capacity must decrease and
// converge to cap(K).
UscReport usc_check(const Shape& K, const AlphaContext& ctx, int j_max = 64,
                    const SearchSpec& spec = {});

// cap(K; W^{1,1}) for convex K: the classical perimeter.
double w11_capacity(const Shape& K);

struct CapacityLimits {
  LimitScanResult alpha0;  // alpha*cap -> 2 n omega_n V(K)
  LimitScanResult alpha1;  // (1-alpha)*cap -> tau_n P(K)
};

CapacityLimits capacity_limit_checks(const Shape& K, std::vector<double> grid0 = {},
                                     std::vector<double> grid1 = {},
                                     const SearchSpec& spec = {});

}  // namespace fracap

#endif
