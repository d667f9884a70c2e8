// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FRACAP_BESOV_HPP
#define FRACAP_BESOV_HPP

#include <string>
#include <vector>

#include "fracap/geometry.hpp"
#include "fracap/numerics.hpp"
#include "fracap/perimeter.hpp"

namespace fracap {

// A compactly supported grid function standing in for f in C_0^infty: values
// at cell centers, zero on the outermost cell layer (compact support
// witnessed at construction).
class SampledFunction {
 public:
  static SampledFunction from_values(int n, Point origin, Point spacing,
                                     std::vector<int> extents, std::vector<double> values);

  int dim() const { return n_; }
  const Point& origin() const { return origin_; }
  const Point& spacing() const { return spacing_; }
  const std::vector<int>& extents() const { return extents_; }
  const std::vector<double>& values() const { return values_; }
  const BoxGeom& support_box() const { return support_box_; }

  double cell_volume() const;
  std::size_t cell_count() const { return values_.size(); }
  double value(const std::vector<int>& idx) const;

  // multilinear interpolation between cell centers, zero outside the grid
  double eval(const double* x) const;

  double l1_norm() const;
  double max_abs() const;
  // discrete ||grad f||_1 by forward differences
  double total_variation() const;

  SampledFunction scaled_argument(double r) const;  // x -> f(r x), resampled exactly

 private:
  SampledFunction() = default;
  int n_ = 0;
  Point origin_, spacing_;
  std::vector<int> extents_;
  std::vector<double> values_;
  BoxGeom support_box_;
};

// ---------------------------------------------------------------------------
// factories and file I/O

SampledFunction make_tent(double spacing = 1.0 / 2048);          // n=1, 1-|x| on (-1,1)
SampledFunction make_bump(double radius = 1.0, double spacing = 1.0 / 24);  // n=2, (1-|x|^2/r^2)^2
SampledFunction make_pyramid(double spacing = 1.0 / 32);         // n=2, 1-max(|x|,|y|)

struct GridSpec {
  double spacing = 0.0;  // 0 picks eps/16
};

// Lipschitz cutoff max(0, 1 - dist(x, closure(s))/eps): 1 on s, 0 at
// distance >= eps. The grid must resolve eps with at least 8 cells.
SampledFunction build_cutoff(const Shape& s, double eps, const GridSpec& grid = {});

SampledFunction load_grid_file(const std::string& path);
void save_grid_file(const SampledFunction& f, const std::string& path);

// ---------------------------------------------------------------------------
// operations

// int |f(x+h) - f(x)| dx; exact lattice sums for lattice offsets, midpoint
// sampling of the interpolant otherwise.
double diff_volume(const SampledFunction& f, const Point& h);

// Besov seminorm: difference volumes on the offset lattice integrated against
// |h|^{-n-alpha}, exact 2||f||_1 tail beyond the support diameter.
Estimate besov_seminorm(const SampledFunction& f, const AlphaContext& ctx,
                        const QuadratureSpec& spec = {});

double lp_norm(const SampledFunction& f, double p);

// {|f| > t} as the union of grid cells whose center value exceeds t; the
// explicit Empty marker above max|f|. Requires t > 0.
Shape superlevel_set(const SampledFunction& f, double t);

// sorted distinct positive values of |f| (the level steps of the grid function)
std::vector<double> distinct_levels(const SampledFunction& f);

struct CoareaSpec {
  int t_nodes = 64;          // Gauss nodes when the exact level sum is too large
  std::size_t exact_level_limit = 8192;  // use the exact sum below this many levels
  QuadratureSpec perimeter_quad{1e-10, 1e-8, 4000, 0.0};
};

// 2 * int_0^infty P_alpha({|f| > t}) dt, by the exact level-step sum for 1-D
// grids and Gauss quadrature in t otherwise.
Estimate coarea_decompose(const SampledFunction& f, const AlphaContext& ctx,
                          const CoareaSpec& spec = {});

}  // namespace fracap

#endif
