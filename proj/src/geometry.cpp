// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#include "fracap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "fracap/constants.hpp"

namespace fracap {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double sq(double x) { return x * x; }

}  // namespace

double BoxGeom::volume() const {
  double v = 1.0;
  for (int d = 0; d < dim(); ++d) v *= side(d);
  return v;
}

double BoxGeom::diameter() const {
  double s = 0.0;
  for (int d = 0; d < dim(); ++d) s += sq(side(d));
  return std::sqrt(s);
}

Point BoxGeom::center() const {
  Point c(lo.size());
  for (std::size_t d = 0; d < lo.size(); ++d) c[d] = 0.5 * (lo[d] + hi[d]);
  return c;
}

bool BoxGeom::contains(const double* x) const {
  for (int d = 0; d < dim(); ++d)
    if (x[d] < lo[d] || x[d] > hi[d]) return false;
  return true;
}

std::size_t GridMeta::cell_count() const {
  std::size_t c = 1;
  for (int e : extents) c *= static_cast<std::size_t>(e);
  return c;
}

std::size_t GridMeta::linear_index(const std::vector<int>& idx) const {
  std::size_t k = 0;
  for (int d = 0; d < dim(); ++d) k = k * extents[d] + idx[d];
  return k;
}

BoxGeom GridMeta::cell_box(const std::vector<int>& idx) const {
  BoxGeom b;
  b.lo.resize(dim());
  b.hi.resize(dim());
  for (int d = 0; d < dim(); ++d) {
    b.lo[d] = origin[d] + idx[d] * spacing[d];
    b.hi[d] = b.lo[d] + spacing[d];
  }
  return b;
}

// ---------------------------------------------------------------------------
// construction

Shape Shape::interval(double a, double b) {
  require(a < b, "Shape::interval: requires a < b");
  return Shape(IntervalGeom{a, b}, 1);
}

Shape Shape::ball(Point center, double radius) {
  require(radius > 0.0, "Shape::ball: radius must be positive");
  const int n = static_cast<int>(center.size());
  require(n >= 1 && n <= kMaxDimension, "Shape::ball: dimension must lie in [1,16]");
  return Shape(BallGeom{std::move(center), radius}, n);
}

Shape Shape::ball(int n, double radius) { return ball(Point(n, 0.0), radius); }

Shape Shape::box(Point lo, Point hi) {
  require(lo.size() == hi.size(), "Shape::box: corner dimensions differ");
  const int n = static_cast<int>(lo.size());
  require(n >= 1 && n <= kMaxDimension, "Shape::box: dimension must lie in [1,16]");
  for (int d = 0; d < n; ++d) require(lo[d] < hi[d], "Shape::box: requires lo < hi componentwise");
  return Shape(BoxGeom{std::move(lo), std::move(hi)}, n);
}

namespace {

bool interiors_overlap(const BoxGeom& a, const BoxGeom& b) {
  for (int d = 0; d < a.dim(); ++d) {
    const double lo = std::max(a.lo[d], b.lo[d]);
    const double hi = std::min(a.hi[d], b.hi[d]);
    if (!(lo < hi)) return false;
  }
  return true;
}

}  // namespace

Shape Shape::box_union(std::vector<BoxGeom> boxes) {
  require(!boxes.empty(), "Shape::box_union: needs at least one box");
  const int n = boxes.front().dim();
  require(n >= 1 && n <= kMaxDimension, "Shape::box_union: dimension must lie in [1,16]");
  for (const auto& b : boxes) {
    require(b.dim() == n, "Shape::box_union: mixed dimensions");
    for (int d = 0; d < n; ++d) require(b.lo[d] < b.hi[d], "Shape::box_union: degenerate box");
  }
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j)
      require(!interiors_overlap(boxes[i], boxes[j]),
              "Shape::box_union: boxes must be pairwise disjoint");
  return Shape(BoxUnionGeom{std::move(boxes), nullptr}, n);
}

Shape Shape::grid_union(GridMeta meta) {
  const int n = meta.dim();
  require(n >= 1 && n <= kMaxDimension, "Shape::grid_union: dimension must lie in [1,16]");
  require(meta.origin.size() == meta.spacing.size() &&
              meta.origin.size() == meta.extents.size(),
          "Shape::grid_union: inconsistent metadata");
  for (double s : meta.spacing) require(s > 0.0, "Shape::grid_union: spacing must be positive");
  require(meta.mask.size() == meta.cell_count(), "Shape::grid_union: mask size mismatch");

  BoxUnionGeom u;
  u.grid = std::make_shared<const GridMeta>(std::move(meta));
  const GridMeta& g = *u.grid;
  std::vector<int> idx(n, 0);
  const std::size_t total = g.cell_count();
  for (std::size_t k = 0; k < total; ++k) {
    if (g.mask[k]) u.boxes.push_back(g.cell_box(idx));
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[d] < g.extents[d]) break;
      idx[d] = 0;
    }
  }
  require(!u.boxes.empty(), "Shape::grid_union: empty mask (use Shape::empty)");
  return Shape(std::move(u), n);
}

Shape Shape::indicator(std::function<bool(const double*, int)> inside, BoxGeom bounding_box,
                       std::optional<double> volume_hint) {
  require(static_cast<bool>(inside), "Shape::indicator: null membership oracle");
  const int n = bounding_box.dim();
  require(n >= 1 && n <= kMaxDimension, "Shape::indicator: dimension must lie in [1,16]");
  for (int d = 0; d < n; ++d)
    require(bounding_box.lo[d] < bounding_box.hi[d],
            "Shape::indicator: bounding box must have positive volume");
  if (volume_hint) require(*volume_hint > 0.0, "Shape::indicator: hint must be positive");
  return Shape(IndicatorGeom{std::move(inside), std::move(bounding_box), volume_hint}, n);
}

Shape Shape::empty(int n) {
  require(n >= 1 && n <= kMaxDimension, "Shape::empty: dimension must lie in [1,16]");
  return Shape(EmptyGeom{n}, n);
}

// ---------------------------------------------------------------------------
// queries

bool Shape::is_empty() const { return std::holds_alternative<EmptyGeom>(v_); }

bool Shape::is_convex() const {
  if (std::holds_alternative<IntervalGeom>(v_) || std::holds_alternative<BallGeom>(v_) ||
      std::holds_alternative<BoxGeom>(v_))
    return true;
  if (auto* u = std::get_if<BoxUnionGeom>(&v_)) return u->boxes.size() == 1;
  return false;
}

BoxGeom Shape::bounding_box() const {
  if (auto* i = std::get_if<IntervalGeom>(&v_)) return BoxGeom{{i->a}, {i->b}};
  if (auto* b = std::get_if<BallGeom>(&v_)) {
    BoxGeom box;
    box.lo.resize(dim_);
    box.hi.resize(dim_);
    for (int d = 0; d < dim_; ++d) {
      box.lo[d] = b->center[d] - b->radius;
      box.hi[d] = b->center[d] + b->radius;
    }
    return box;
  }
  if (auto* b = std::get_if<BoxGeom>(&v_)) return *b;
  if (auto* u = std::get_if<BoxUnionGeom>(&v_)) {
    BoxGeom box = u->boxes.front();
    for (const auto& b : u->boxes)
      for (int d = 0; d < dim_; ++d) {
        box.lo[d] = std::min(box.lo[d], b.lo[d]);
        box.hi[d] = std::max(box.hi[d], b.hi[d]);
      }
    return box;
  }
  if (auto* s = std::get_if<IndicatorGeom>(&v_)) return s->bounding_box;
  throw UnsupportedOperation("Shape: empty set has no bounding box");
}

double Shape::diameter_bound() const {
  if (auto* b = std::get_if<BallGeom>(&v_)) return 2.0 * b->radius;
  return bounding_box().diameter();
}

Point Shape::centroid() const {
  if (auto* i = std::get_if<IntervalGeom>(&v_)) return {0.5 * (i->a + i->b)};
  if (auto* b = std::get_if<BallGeom>(&v_)) return b->center;
  if (auto* b = std::get_if<BoxGeom>(&v_)) return b->center();
  if (auto* u = std::get_if<BoxUnionGeom>(&v_)) {
    Point c(dim_, 0.0);
    double vol = 0.0;
    for (const auto& b : u->boxes) {
      const double v = b.volume();
      const Point m = b.center();
      for (int d = 0; d < dim_; ++d) c[d] += v * m[d];
      vol += v;
    }
    for (int d = 0; d < dim_; ++d) c[d] /= vol;
    return c;
  }
  if (auto* s = std::get_if<IndicatorGeom>(&v_)) return s->bounding_box.center();
  throw UnsupportedOperation("Shape: empty set has no centroid");
}

bool Shape::contains_raw(const double* x) const {
  if (std::holds_alternative<EmptyGeom>(v_)) return false;
  if (auto* i = std::get_if<IntervalGeom>(&v_)) return x[0] >= i->a && x[0] <= i->b;
  if (auto* b = std::get_if<BallGeom>(&v_)) {
    double s = 0.0;
    for (int d = 0; d < dim_; ++d) s += sq(x[d] - b->center[d]);
    return s <= sq(b->radius);
  }
  if (auto* b = std::get_if<BoxGeom>(&v_)) return b->contains(x);
  if (auto* u = std::get_if<BoxUnionGeom>(&v_)) {
    for (const auto& b : u->boxes)
      if (b.contains(x)) return true;
    return false;
  }
  const auto& s = std::get<IndicatorGeom>(v_);
  return s.inside(x, dim_);
}

bool Shape::contains(const Point& x) const {
  require(static_cast<int>(x.size()) == dim_, "Shape::contains: dimension mismatch");
  return contains_raw(x.data());
}

Estimate Shape::volume(const McSpec& mc) const {
  if (std::holds_alternative<EmptyGeom>(v_)) return Estimate::exact(0.0);
  if (auto* i = std::get_if<IntervalGeom>(&v_)) return Estimate::exact(i->length());
  if (auto* b = std::get_if<BallGeom>(&v_))
    return Estimate::exact(unit_ball_volume(dim_) * std::pow(b->radius, dim_));
  if (auto* b = std::get_if<BoxGeom>(&v_)) return Estimate::exact(b->volume());
  if (auto* u = std::get_if<BoxUnionGeom>(&v_)) {
    double v = 0.0;
    for (const auto& b : u->boxes) v += b.volume();
    return Estimate::exact(v);
  }
  const auto& s = std::get<IndicatorGeom>(v_);
  if (s.volume_hint) return Estimate::exact(*s.volume_hint);
  const BoxGeom& bb = s.bounding_box;
  const int n = dim_;
  const double bbvol = bb.volume();
  auto sampler = [&bb, n](const CounterRng& rng, std::uint64_t i) {
    SamplePoint p;
    p.dim = n;
    for (int d = 0; d < n; ++d)
      p.x[d] = bb.lo[d] + (bb.hi[d] - bb.lo[d]) * rng.uniform(i, d);
    return p;
  };
  auto member = [this, bbvol](const SamplePoint& p) {
    return contains_raw(p.x) ? bbvol : 0.0;
  };
  return mc_mean(sampler, member, mc);
}

// ---------------------------------------------------------------------------
// covariogram

double box_overlap(const BoxGeom& a, const BoxGeom& b, const double* h) {
  double v = 1.0;
  for (int d = 0; d < a.dim(); ++d) {
    const double lo = std::max(a.lo[d], b.lo[d] + h[d]);
    const double hi = std::min(a.hi[d], b.hi[d] + h[d]);
    if (!(lo < hi)) return 0.0;
    v *= hi - lo;
  }
  return v;
}

namespace {

// V - V*prod(1 - x_d) for x_d in [0,1], accumulated without cancellation
double box_deficit(const BoxGeom& b, const double* h) {
  double e = 0.0;
  for (int d = 0; d < b.dim(); ++d) {
    const double x = std::min(1.0, std::abs(h[d]) / b.side(d));
    e = e + x - x * e;
  }
  return e * b.volume();
}

}  // namespace

double ball_self_deficit(int n, double radius, double d) {
  if (d <= 0.0) return 0.0;
  const double vol = unit_ball_volume(n) * std::pow(radius, n);
  if (d >= 2.0 * radius) return vol;
  switch (n) {
    case 1:
      return d;
    case 2: {
      const double u = d / (2.0 * radius);
      return 2.0 * sq(radius) * std::asin(u) + 0.5 * d * std::sqrt(4.0 * sq(radius) - sq(d));
    }
    case 3:
      return std::numbers::pi * d * (12.0 * sq(radius) - sq(d)) / 12.0;
    default: {
      // 2 * int_0^{d/2} omega_{n-1} (r^2 - t^2)^{(n-1)/2} dt
      const double wn1 = unit_ball_volume(n - 1);
      const double half = 0.5 * d;
      QuadratureSpec spec;
      spec.abs_tol = 1e-14 * vol;
      spec.rel_tol = 1e-12;
      auto f = [=](double t) { return std::pow(std::max(0.0, sq(radius) - sq(t)), 0.5 * (n - 1)); };
      Estimate e = integrate_1d(f, 0.0, half, spec);
      return 2.0 * wn1 * e.value;
    }
  }
}

double Shape::covariogram_deficit(const double* h) const {
  if (std::holds_alternative<EmptyGeom>(v_)) return 0.0;
  if (auto* i = std::get_if<IntervalGeom>(&v_)) return std::min(std::abs(h[0]), i->length());
  if (auto* b = std::get_if<BallGeom>(&v_)) {
    double s = 0.0;
    for (int d = 0; d < dim_; ++d) s += sq(h[d]);
    return ball_self_deficit(dim_, b->radius, std::sqrt(s));
  }
  if (auto* b = std::get_if<BoxGeom>(&v_)) return box_deficit(*b, h);
  if (auto* u = std::get_if<BoxUnionGeom>(&v_)) {
    double deficit = 0.0;
    for (const auto& b : u->boxes) deficit += box_deficit(b, h);
    const std::size_t m = u->boxes.size();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (i != j) deficit -= box_overlap(u->boxes[i], u->boxes[j], h);
    return std::max(0.0, deficit);
  }
  throw UnsupportedOperation("covariogram_deficit: indicator sets need Monte Carlo");
}

Estimate Shape::covariogram(const Point& h, const McSpec& mc) const {
  require(static_cast<int>(h.size()) == dim_, "covariogram: offset dimension mismatch");
  if (std::holds_alternative<EmptyGeom>(v_)) return Estimate::exact(0.0);
  if (!std::holds_alternative<IndicatorGeom>(v_)) {
    const double v = volume().value;
    const double deficit = covariogram_deficit(h.data());
    Estimate e = Estimate::exact(std::max(0.0, v - deficit));
    if (std::holds_alternative<BallGeom>(v_) && dim_ >= 4)
      e.method = Method::quadrature;  // cap-volume integral behind the value
    return e;
  }
  // Monte Carlo: V(E cap (E-h)) = |bbox| * mean of 1_E(x) 1_E(x+h)
  const auto& s = std::get<IndicatorGeom>(v_);
  const BoxGeom& bb = s.bounding_box;
  const int n = dim_;
  const double bbvol = bb.volume();
  auto sampler = [&bb, n](const CounterRng& rng, std::uint64_t i) {
    SamplePoint p;
    p.dim = n;
    for (int d = 0; d < n; ++d)
      p.x[d] = bb.lo[d] + (bb.hi[d] - bb.lo[d]) * rng.uniform(i, d);
    return p;
  };
  auto both = [this, &h, n, bbvol](const SamplePoint& p) {
    if (!contains_raw(p.x)) return 0.0;
    double shifted[16];
    for (int d = 0; d < n; ++d) shifted[d] = p.x[d] + h[d];
    return contains_raw(shifted) ? bbvol : 0.0;
  };
  return mc_mean(sampler, both, mc);
}

// ---------------------------------------------------------------------------
// distance / perimeter / transforms

double Shape::distance(const Point& x) const {
  require(static_cast<int>(x.size()) == dim_, "distance: dimension mismatch");
  if (std::holds_alternative<EmptyGeom>(v_))
    return std::numeric_limits<double>::infinity();
  if (auto* i = std::get_if<IntervalGeom>(&v_))
    return std::max({0.0, i->a - x[0], x[0] - i->b});
  if (auto* b = std::get_if<BallGeom>(&v_)) {
    double s = 0.0;
    for (int d = 0; d < dim_; ++d) s += sq(x[d] - b->center[d]);
    return std::max(0.0, std::sqrt(s) - b->radius);
  }
  auto box_dist = [this](const BoxGeom& b, const Point& p) {
    double s = 0.0;
    for (int d = 0; d < dim_; ++d) s += sq(std::max({0.0, b.lo[d] - p[d], p[d] - b.hi[d]}));
    return std::sqrt(s);
  };
  if (auto* b = std::get_if<BoxGeom>(&v_)) return box_dist(*b, x);
  if (auto* u = std::get_if<BoxUnionGeom>(&v_)) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : u->boxes) best = std::min(best, box_dist(b, x));
    return best;
  }
  throw UnsupportedOperation("distance: not available for indicator sets");
}

double Shape::classical_perimeter() const {
  if (std::holds_alternative<EmptyGeom>(v_)) return 0.0;
  if (std::holds_alternative<IntervalGeom>(v_)) return 2.0;
  if (auto* b = std::get_if<BallGeom>(&v_))
    return sphere_area(dim_) * std::pow(b->radius, dim_ - 1);
  auto box_perimeter = [this](const BoxGeom& b) {
    double p = 0.0;
    for (int d = 0; d < dim_; ++d) {
      double face = 1.0;
      for (int e = 0; e < dim_; ++e)
        if (e != d) face *= b.side(e);
      p += 2.0 * face;
    }
    return p;
  };
  if (auto* b = std::get_if<BoxGeom>(&v_)) return box_perimeter(*b);
  if (auto* u = std::get_if<BoxUnionGeom>(&v_)) {
    for (std::size_t i = 0; i < u->boxes.size(); ++i)
      for (std::size_t j = i + 1; j < u->boxes.size(); ++j) {
        bool separated = false;
        for (int d = 0; d < dim_; ++d)
          if (u->boxes[i].hi[d] < u->boxes[j].lo[d] || u->boxes[j].hi[d] < u->boxes[i].lo[d])
            separated = true;
        if (!separated)
          throw UnsupportedOperation(
              "classical_perimeter: BoxUnion components must be strictly separated");
      }
    double p = 0.0;
    for (const auto& b : u->boxes) p += box_perimeter(b);
    return p;
  }
  throw UnsupportedOperation("classical_perimeter: not available for indicator sets");
}

Shape scale(const Shape& s, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("scale: factor must be positive");
  const int n = s.dim();
  if (s.is_empty()) return Shape::empty(n);
  if (auto* i = std::get_if<IntervalGeom>(&s.variant())) return Shape::interval(r * i->a, r * i->b);
  if (auto* b = std::get_if<BallGeom>(&s.variant())) {
    Point c = b->center;
    for (auto& x : c) x *= r;
    return Shape::ball(std::move(c), r * b->radius);
  }
  auto scale_box = [r](const BoxGeom& b) {
    BoxGeom out = b;
    for (auto& x : out.lo) x *= r;
    for (auto& x : out.hi) x *= r;
    return out;
  };
  if (auto* b = std::get_if<BoxGeom>(&s.variant())) {
    BoxGeom sb = scale_box(*b);
    return Shape::box(sb.lo, sb.hi);
  }
  if (auto* u = std::get_if<BoxUnionGeom>(&s.variant())) {
    if (u->grid) {
      GridMeta meta = *u->grid;
      for (auto& x : meta.origin) x *= r;
      for (auto& x : meta.spacing) x *= r;
      return Shape::grid_union(std::move(meta));
    }
    std::vector<BoxGeom> boxes;
    boxes.reserve(u->boxes.size());
    for (const auto& b : u->boxes) boxes.push_back(scale_box(b));
    return Shape::box_union(std::move(boxes));
  }
  const auto& ind = std::get<IndicatorGeom>(s.variant());
  auto inner = ind.inside;
  auto inside = [inner, r](const double* x, int nn) {
    double y[16];
    for (int d = 0; d < nn; ++d) y[d] = x[d] / r;
    return inner(y, nn);
  };
  BoxGeom bb = ind.bounding_box;
  for (auto& x : bb.lo) x *= r;
  for (auto& x : bb.hi) x *= r;
  std::optional<double> hint;
  if (ind.volume_hint) hint = *ind.volume_hint * std::pow(r, n);
  return Shape::indicator(inside, std::move(bb), hint);
}

Shape translate(const Shape& s, const Point& v) {
  if (static_cast<int>(v.size()) != s.dim())
    throw std::invalid_argument("translate: dimension mismatch");
  const int n = s.dim();
  if (s.is_empty()) return Shape::empty(n);
  if (auto* i = std::get_if<IntervalGeom>(&s.variant()))
    return Shape::interval(i->a + v[0], i->b + v[0]);
  if (auto* b = std::get_if<BallGeom>(&s.variant())) {
    Point c = b->center;
    for (int d = 0; d < n; ++d) c[d] += v[d];
    return Shape::ball(std::move(c), b->radius);
  }
  auto shift_box = [&v, n](const BoxGeom& b) {
    BoxGeom out = b;
    for (int d = 0; d < n; ++d) {
      out.lo[d] += v[d];
      out.hi[d] += v[d];
    }
    return out;
  };
  if (auto* b = std::get_if<BoxGeom>(&s.variant())) {
    BoxGeom sb = shift_box(*b);
    return Shape::box(sb.lo, sb.hi);
  }
  if (auto* u = std::get_if<BoxUnionGeom>(&s.variant())) {
    if (u->grid) {
      GridMeta meta = *u->grid;
      for (int d = 0; d < n; ++d) meta.origin[d] += v[d];
      return Shape::grid_union(std::move(meta));
    }
    std::vector<BoxGeom> boxes;
    boxes.reserve(u->boxes.size());
    for (const auto& b : u->boxes) boxes.push_back(shift_box(b));
    return Shape::box_union(std::move(boxes));
  }
  const auto& ind = std::get<IndicatorGeom>(s.variant());
  auto inner = ind.inside;
  Point shift = v;
  auto inside = [inner, shift](const double* x, int nn) {
    double y[16];
    for (int d = 0; d < nn; ++d) y[d] = x[d] - shift[d];
    return inner(y, nn);
  };
  BoxGeom bb = shift_box(ind.bounding_box);
  return Shape::indicator(inside, std::move(bb), ind.volume_hint);
}

std::string Shape::describe() const {
  std::ostringstream os;
  if (std::holds_alternative<EmptyGeom>(v_)) {
    os << "empty:n=" << dim_;
  } else if (auto* i = std::get_if<IntervalGeom>(&v_)) {
    os << "interval:a=" << i->a << ",b=" << i->b;
  } else if (auto* b = std::get_if<BallGeom>(&v_)) {
    os << "ball:n=" << dim_ << ",r=" << b->radius;
  } else if (std::holds_alternative<BoxGeom>(v_)) {
    os << "box:n=" << dim_;
  } else if (auto* u = std::get_if<BoxUnionGeom>(&v_)) {
    os << "boxunion:" << u->boxes.size() << " boxes";
    if (u->grid) os << " (lattice)";
  } else {
    os << "indicator:n=" << dim_;
  }
  return os.str();
}

}  // namespace fracap
