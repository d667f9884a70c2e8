// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FRACAP_GEOMETRY_HPP
#define FRACAP_GEOMETRY_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fracap/estimate.hpp"
#include "fracap/numerics.hpp"

namespace fracap {

using Point = std::vector<double>;

struct BoxGeom {
  Point lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double side(int d) const { return hi[d] - lo[d]; }
  double volume() const;
  double diameter() const;
  Point center() const;
  bool contains(const double* x) const;
};

struct IntervalGeom {
  double a, b;
  double length() const { return b - a; }
};

struct BallGeom {
  Point center;
  double radius;
};

// Occupancy mask on a regular lattice of cells; the representation behind
// superlevel sets and rasterized neighborhoods.
struct GridMeta {
  Point origin;               // corner of cell (0,...,0)
  Point spacing;              // per-axis cell size
  std::vector<int> extents;   // cells per axis
  std::vector<std::uint8_t> mask;  // row-major occupancy

  int dim() const { return static_cast<int>(extents.size()); }
  std::size_t cell_count() const;
  std::size_t linear_index(const std::vector<int>& idx) const;
  BoxGeom cell_box(const std::vector<int>& idx) const;
};

struct BoxUnionGeom {
  std::vector<BoxGeom> boxes;
  std::shared_ptr<const GridMeta> grid;  // set when the union is a lattice mask
};

struct IndicatorGeom {
  std::function<bool(const double*, int)> inside;
  BoxGeom bounding_box;
  std::optional<double> volume_hint;
};

struct EmptyGeom {
  int n;
};

// A bounded subset of R^n: one of the closed-form variants or a membership
// oracle with a bounding box. Immutable after construction; zero-volume
// inputs are rejected except for the explicit Empty marker.
class Shape {
 public:
  using Variant = std::variant<EmptyGeom, IntervalGeom, BallGeom, BoxGeom, BoxUnionGeom, IndicatorGeom>;

  static Shape interval(double a, double b);
  static Shape ball(Point center, double radius);
  static Shape ball(int n, double radius);  // centered at the origin
  static Shape box(Point lo, Point hi);
  static Shape box_union(std::vector<BoxGeom> boxes);
  static Shape grid_union(GridMeta meta);  // cells are disjoint by construction
  static Shape indicator(std::function<bool(const double*, int)> inside, BoxGeom bounding_box,
                         std::optional<double> volume_hint = std::nullopt);
  static Shape empty(int n);

  int dim() const { return dim_; }
  bool is_empty() const;
  bool is_convex() const;
  const Variant& variant() const { return v_; }

  BoxGeom bounding_box() const;
  double diameter_bound() const;
  Point centroid() const;
  bool contains(const Point& x) const;
  bool contains_raw(const double* x) const;

  // Exact volume where closed forms exist; Monte Carlo for oracles without a
  // hint (the hint, when present, is trusted as exact).
  Estimate volume(const McSpec& mc = {}) const;

  // V(E cap (E+h)); exact for Interval/Box/BoxUnion, lens closed forms for
  // balls with n <= 3, the 1-D cap-volume integral for n >= 4, Monte Carlo
  // for indicator sets.
  Estimate covariogram(const Point& h, const McSpec& mc = {}) const;

  // V(E) - g_E(h) evaluated without cancellation; this is the quantity the
  // perimeter integrand needs, stable down to |h| ~ 1e-300. Throws
  // UnsupportedOperation for indicator sets.
  double covariogram_deficit(const double* h) const;

  // Euclidean distance to the closure; unsupported for indicator sets.
  double distance(const Point& x) const;

  // Exact classical perimeter; BoxUnion components must be strictly
  // separated, indicator sets are unsupported.
  double classical_perimeter() const;

  std::string describe() const;

 private:
  Shape(Variant v, int dim) : v_(std::move(v)), dim_(dim) {}
  Variant v_;
  int dim_;
};

Shape scale(const Shape& s, double r);
Shape translate(const Shape& s, const Point& v);

// deficit of a single ball against its own translate at distance d
double ball_self_deficit(int n, double radius, double d);

// volume of the overlap of two axis-aligned boxes, the second shifted by h
double box_overlap(const BoxGeom& a, const BoxGeom& b, const double* h);

}  // namespace fracap

#endif
