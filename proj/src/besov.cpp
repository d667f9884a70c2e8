// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#include "fracap/besov.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "fracap/constants.hpp"

namespace fracap {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

// ---------------------------------------------------------------------------
// SampledFunction

SampledFunction SampledFunction::from_values(int n, Point origin, Point spacing,
                                             std::vector<int> extents,
                                             std::vector<double> values) {
  require(n >= 1 && n <= kMaxDimension, "SampledFunction: dimension must lie in [1,16]");
  require(static_cast<int>(origin.size()) == n && static_cast<int>(spacing.size()) == n &&
              static_cast<int>(extents.size()) == n,
          "SampledFunction: inconsistent metadata");
  std::size_t count = 1;
  for (int d = 0; d < n; ++d) {
    require(spacing[d] > 0.0, "SampledFunction: spacing must be positive");
    require(extents[d] >= 3, "SampledFunction: needs at least 3 cells per axis");
    count *= static_cast<std::size_t>(extents[d]);
  }
  require(values.size() == count, "SampledFunction: value count mismatch");
  for (double v : values) require(std::isfinite(v), "SampledFunction: values must be finite");

  // compact support witnessed: the outermost cell layer must vanish
  std::vector<int> idx(n, 0);
  for (std::size_t lin = 0; lin < count; ++lin) {
    bool boundary = false;
    for (int d = 0; d < n; ++d)
      if (idx[d] == 0 || idx[d] == extents[d] - 1) boundary = true;
    if (boundary && values[lin] != 0.0)
      throw std::invalid_argument("SampledFunction: boundary layer must be zero");
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[d] < extents[d]) break;
      idx[d] = 0;
    }
  }

  SampledFunction f;
  f.n_ = n;
  f.origin_ = std::move(origin);
  f.spacing_ = std::move(spacing);
  f.extents_ = std::move(extents);
  f.values_ = std::move(values);
  f.support_box_.lo.resize(n);
  f.support_box_.hi.resize(n);
  for (int d = 0; d < n; ++d) {
    f.support_box_.lo[d] = f.origin_[d];
    f.support_box_.hi[d] = f.origin_[d] + f.extents_[d] * f.spacing_[d];
  }
  return f;
}

double SampledFunction::cell_volume() const {
  double v = 1.0;
  for (double s : spacing_) v *= s;
  return v;
}

double SampledFunction::value(const std::vector<int>& idx) const {
  std::size_t lin = 0;
  for (int d = 0; d < n_; ++d) {
    if (idx[d] < 0 || idx[d] >= extents_[d]) return 0.0;
    lin = lin * extents_[d] + idx[d];
  }
  return values_[lin];
}

double SampledFunction::eval(const double* x) const {
  int base[16];
  double w1[16], w0[16];
  for (int d = 0; d < n_; ++d) {
    const double u = (x[d] - origin_[d]) / spacing_[d] - 0.5;
    const double fl = std::floor(u);
    base[d] = static_cast<int>(fl);
    w1[d] = u - fl;
    w0[d] = (fl + 1.0) - u;
    if (base[d] < -1 || base[d] > extents_[d] - 1) return 0.0;
  }
  double acc = 0.0;
  for (int c = 0; c < (1 << n_); ++c) {
    double w = 1.0;
    std::size_t lin = 0;
    bool inside = true;
    for (int d = 0; d < n_; ++d) {
      const int bit = (c >> d) & 1;
      w *= bit ? w1[d] : w0[d];
      const int id = base[d] + bit;
      if (id < 0 || id >= extents_[d]) inside = false;
      lin = lin * extents_[d] + std::max(0, std::min(id, extents_[d] - 1));
    }
    if (inside && w != 0.0) acc += w * values_[lin];
  }
  return acc;
}

double SampledFunction::l1_norm() const {
  double s = 0.0;
  for (double v : values_) s += std::abs(v);
  return s * cell_volume();
}

double SampledFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SampledFunction::total_variation() const {
  const double cv = cell_volume();
  double tv = 0.0;
  std::vector<int> idx(n_, 0);
  const std::size_t count = values_.size();
  for (std::size_t lin = 0; lin < count; ++lin) {
    for (int d = 0; d < n_; ++d) {
      if (idx[d] + 1 < extents_[d]) {
        std::size_t stride = 1;
        for (int e = n_ - 1; e > d; --e) stride *= extents_[e];
        tv += std::abs(values_[lin + stride] - values_[lin]) / spacing_[d] * cv;
      }
    }
    for (int d = n_ - 1; d >= 0; --d) {
      if (++idx[d] < extents_[d]) break;
      idx[d] = 0;
    }
  }
  return tv;
}

SampledFunction SampledFunction::scaled_argument(double r) const {
  require(r > 0.0, "scaled_argument: factor must be positive");
  Point origin = origin_, spacing = spacing_;
  for (int d = 0; d < n_; ++d) {
    origin[d] /= r;
    spacing[d] /= r;
  }
  return from_values(n_, std::move(origin), std::move(spacing), extents_, values_);
}

// ---------------------------------------------------------------------------
// factories

namespace {

SampledFunction sample_on_grid(int n, const Point& lo, const Point& hi, double spacing,
                               const std::function<double(const double*)>& fn) {
  require(spacing > 0.0, "sample_on_grid: spacing must be positive");
  Point origin(n);
  std::vector<int> extents(n);
  for (int d = 0; d < n; ++d) {
    // two padding cells on each side keep the boundary layer at zero
    origin[d] = lo[d] - 2.0 * spacing;
    const double cells = std::ceil((hi[d] - lo[d]) / spacing) + 4;
    require(cells <= 1 << 22, "sample_on_grid: grid too fine for this axis");
    extents[d] = static_cast<int>(cells);
  }
  std::size_t count = 1;
  for (int d = 0; d < n; ++d) {
    count *= static_cast<std::size_t>(extents[d]);
    require(count <= (std::size_t{1} << 26), "sample_on_grid: grid exceeds the cell budget");
  }
  std::vector<double> values(count);
  std::vector<int> idx(n, 0);
  double x[16];
  for (std::size_t lin = 0; lin < count; ++lin) {
    bool boundary = false;
    for (int d = 0; d < n; ++d) {
      x[d] = origin[d] + (idx[d] + 0.5) * spacing;
      if (idx[d] == 0 || idx[d] == extents[d] - 1) boundary = true;
    }
    values[lin] = boundary ? 0.0 : fn(x);
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[d] < extents[d]) break;
      idx[d] = 0;
    }
  }
  return SampledFunction::from_values(n, std::move(origin), Point(n, spacing),
                                      std::move(extents), std::move(values));
}

}  // namespace

SampledFunction make_tent(double spacing) {
  auto tent = [](const double* x) { return std::max(0.0, 1.0 - std::abs(x[0])); };
  return sample_on_grid(1, {-1.0}, {1.0}, spacing, tent);
}

SampledFunction make_bump(double radius, double spacing) {
  auto bump = [radius](const double* x) {
    const double q = 1.0 - (x[0] * x[0] + x[1] * x[1]) / (radius * radius);
    return q > 0.0 ? q * q : 0.0;
  };
  return sample_on_grid(2, {-radius, -radius}, {radius, radius}, spacing, bump);
}

SampledFunction make_pyramid(double spacing) {
  auto pyr = [](const double* x) {
    return std::max(0.0, 1.0 - std::max(std::abs(x[0]), std::abs(x[1])));
  };
  return sample_on_grid(2, {-1.0, -1.0}, {1.0, 1.0}, spacing, pyr);
}

SampledFunction build_cutoff(const Shape& s, double eps, const GridSpec& grid) {
  require(eps > 0.0, "build_cutoff: eps must be positive");
  const double spacing = grid.spacing > 0.0 ? grid.spacing : eps / 16.0;
  if (spacing > eps / 8.0)
    throw std::invalid_argument("build_cutoff: grid too coarse, need >= 8 cells per eps");
  const int n = s.dim();
  const BoxGeom bb = s.bounding_box();
  Point lo(n), hi(n);
  for (int d = 0; d < n; ++d) {
    lo[d] = bb.lo[d] - eps;
    hi[d] = bb.hi[d] + eps;
  }
  auto cutoff = [&s, eps, n](const double* x) {
    Point p(x, x + n);
    return std::max(0.0, 1.0 - s.distance(p) / eps);
  };
  return sample_on_grid(n, lo, hi, spacing, cutoff);
}

SampledFunction load_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_grid_file: cannot open " + path);
  int n = 0;
  in >> n;
  require(n >= 1 && n <= kMaxDimension, "load_grid_file: bad dimension line");
  Point origin(n), spacing(n);
  std::vector<int> extents(n);
  for (int d = 0; d < n; ++d) in >> origin[d];
  for (int d = 0; d < n; ++d) in >> spacing[d];
  for (int d = 0; d < n; ++d) in >> extents[d];
  if (!in) throw std::invalid_argument("load_grid_file: truncated header");
  std::size_t count = 1;
  for (int d = 0; d < n; ++d) {
    require(extents[d] >= 3 && extents[d] <= (1 << 22), "load_grid_file: bad extent");
    count *= static_cast<std::size_t>(extents[d]);
    require(count <= (std::size_t{1} << 26), "load_grid_file: grid exceeds the cell budget");
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) in >> values[i];
  if (!in) throw std::invalid_argument("load_grid_file: truncated values");
  return SampledFunction::from_values(n, std::move(origin), std::move(spacing),
                                      std::move(extents), std::move(values));
}

void save_grid_file(const SampledFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("save_grid_file: cannot open " + path);
  out.precision(17);
  out << f.dim() << "\n";
  for (int d = 0; d < f.dim(); ++d) out << f.origin()[d] << (d + 1 < f.dim() ? ' ' : '\n');
  for (int d = 0; d < f.dim(); ++d) out << f.spacing()[d] << (d + 1 < f.dim() ? ' ' : '\n');
  for (int d = 0; d < f.dim(); ++d) out << f.extents()[d] << (d + 1 < f.dim() ? ' ' : '\n');
  for (std::size_t i = 0; i < f.values().size(); ++i)
    out << f.values()[i] << ((i + 1) % 8 == 0 ? '\n' : ' ');
  out << "\n";
}

// ---------------------------------------------------------------------------
// difference volumes

namespace {

// exact difference volume at a lattice offset k (step-function view)
double lattice_diff_volume(const SampledFunction& f, const int* k) {
  const int n = f.dim();
  const auto& ext = f.extents();
  std::vector<int> lo(n), hi(n), idx(n);
  for (int d = 0; d < n; ++d) {
    lo[d] = std::min(0, -k[d]) - 1;
    hi[d] = std::max(ext[d], ext[d] - k[d]) + 1;
    idx[d] = lo[d];
  }
  std::vector<int> shifted(n);
  double sum = 0.0;
  while (true) {
    for (int d = 0; d < n; ++d) shifted[d] = idx[d] + k[d];
    sum += std::abs(f.value(shifted) - f.value(idx));
    int d = n - 1;
    for (; d >= 0; --d) {
      if (++idx[d] < hi[d]) break;
      idx[d] = lo[d];
    }
    if (d < 0) break;
  }
  return sum * f.cell_volume();
}

}  // namespace

double diff_volume(const SampledFunction& f, const Point& h) {
  require(static_cast<int>(h.size()) == f.dim(), "diff_volume: offset dimension mismatch");
  const int n = f.dim();
  // lattice fast path
  int k[16];
  bool lattice = true;
  for (int d = 0; d < n; ++d) {
    const double u = h[d] / f.spacing()[d];
    const double r = std::round(u);
    if (std::abs(u - r) > 1e-12 * std::max(1.0, std::abs(u))) lattice = false;
    k[d] = static_cast<int>(r);
  }
  if (lattice) return lattice_diff_volume(f, k);

  // midpoint sampling of the interpolant over the union of both supports
  const auto& ext = f.extents();
  std::vector<int> lo(n), hi(n), idx(n);
  for (int d = 0; d < n; ++d) {
    const double shift = h[d] / f.spacing()[d];
    lo[d] = static_cast<int>(std::floor(std::min(0.0, -shift))) - 1;
    hi[d] = static_cast<int>(std::ceil(std::max(double(ext[d]), ext[d] - shift))) + 1;
    idx[d] = lo[d];
  }
  double x[16], y[16];
  double sum = 0.0;
  while (true) {
    for (int d = 0; d < n; ++d) {
      x[d] = f.origin()[d] + (idx[d] + 0.5) * f.spacing()[d];
      y[d] = x[d] + h[d];
    }
    sum += std::abs(f.eval(y) - f.eval(x));
    int d = n - 1;
    for (; d >= 0; --d) {
      if (++idx[d] < hi[d]) break;
      idx[d] = lo[d];
    }
    if (d < 0) break;
  }
  return sum * f.cell_volume();
}

// ---------------------------------------------------------------------------
// Besov seminorm

namespace {

struct DiffTable {
  int n;
  std::vector<int> kmax;
  std::vector<int> extent;  // 2*kmax+1 per axis
  std::vector<double> data;

  std::size_t index(const int* k) const {
    std::size_t lin = 0;
    for (int d = 0; d < n; ++d) lin = lin * extent[d] + (k[d] + kmax[d]);
    return lin;
  }
  double at(const int* k) const {
    for (int d = 0; d < n; ++d)
      if (k[d] < -kmax[d] || k[d] > kmax[d]) return -1.0;
    return data[index(k)];
  }
};

DiffTable build_diff_table(const SampledFunction& f) {
  const int n = f.dim();
  DiffTable T;
  T.n = n;
  T.kmax.resize(n);
  T.extent.resize(n);
  std::size_t size = 1;
  for (int d = 0; d < n; ++d) {
    T.kmax[d] = f.extents()[d];
    T.extent[d] = 2 * T.kmax[d] + 1;
    size *= static_cast<std::size_t>(T.extent[d]);
  }
  T.data.assign(size, -1.0);

  const double two_l1 = 2.0 * f.l1_norm();
  std::vector<int> k(n, 0), mirrored(n);
  for (int d = 0; d < n; ++d) k[d] = -T.kmax[d];
  while (true) {
    const std::size_t lin = T.index(k.data());
    if (T.data[lin] < 0.0) {
      // disjoint supports whenever one axis offset clears the grid width
      bool disjoint = false;
      for (int d = 0; d < n; ++d)
        if (std::abs(k[d]) >= f.extents()[d]) disjoint = true;
      double v;
      if (disjoint) {
        v = two_l1;
      } else {
        v = lattice_diff_volume(f, k.data());
      }
      T.data[lin] = v;
      for (int d = 0; d < n; ++d) mirrored[d] = -k[d];
      T.data[T.index(mirrored.data())] = v;  // D(-h) = D(h)
    }
    int d = n - 1;
    for (; d >= 0; --d) {
      if (++k[d] <= T.kmax[d]) break;
      k[d] = -T.kmax[d];
    }
    if (d < 0) break;
  }
  return T;
}

}  // namespace

Estimate besov_seminorm(const SampledFunction& f, const AlphaContext& ctx,
                        const QuadratureSpec& spec) {
  if (ctx.n != f.dim()) throw std::invalid_argument("besov_seminorm: dimension mismatch");
  const int n = f.dim();
  const double two_l1 = 2.0 * f.l1_norm();
  if (two_l1 == 0.0) return Estimate::exact(0.0);

  DiffTable T = build_diff_table(f);

  detail::LatticeField field;
  field.n = n;
  for (int d = 0; d < n; ++d) {
    field.spacing[d] = f.spacing()[d];
    field.kmax[d] = T.kmax[d];
  }
  field.asymptote = two_l1;
  field.corner = [&T, two_l1](const int* k) {
    const double v = T.at(k);
    return v < 0.0 ? two_l1 : v;
  };
  Estimate out = detail::lattice_kernel_integral(field, ctx, spec);

  // interpolation credit: second differences of D against the local kernel mass
  double credit = 0.0;
  {
    std::vector<int> k(n, 0);
    for (int d = 0; d < n; ++d) k[d] = -T.kmax[d];
    int plus[16], minus[16];
    double cellvol = f.cell_volume();
    while (true) {
      double h2 = 0.0;
      for (int d = 0; d < n; ++d) {
        const double hd = k[d] * f.spacing()[d];
        h2 += hd * hd;
      }
      double second = 0.0;
      for (int d = 0; d < n; ++d) {
        for (int e = 0; e < n; ++e) plus[e] = minus[e] = k[e];
        plus[d] += 1;
        minus[d] -= 1;
        const double vp = field.corner(plus);
        const double vm = field.corner(minus);
        const double v0 = field.corner(k.data());
        second += std::abs(vp - 2.0 * v0 + vm);
      }
      const double hmin = std::sqrt(std::max(h2, 0.25 * f.spacing()[0] * f.spacing()[0]));
      credit += second / 8.0 * std::pow(hmin, -double(n) - ctx.alpha) * cellvol;
      int d = n - 1;
      for (; d >= 0; --d) {
        if (++k[d] <= T.kmax[d]) break;
        k[d] = -T.kmax[d];
      }
      if (d < 0) break;
    }
  }
  out.error += credit;
  return out;
}

double lp_norm(const SampledFunction& f, double p) {
  require(p >= 1.0, "lp_norm: p must be >= 1");
  double s = 0.0;
  for (double v : f.values()) s += std::pow(std::abs(v), p);
  return std::pow(s * f.cell_volume(), 1.0 / p);
}

// ---------------------------------------------------------------------------
// level sets and coarea

Shape superlevel_set(const SampledFunction& f, double t) {
  require(t > 0.0, "superlevel_set: level must be positive");
  const int n = f.dim();
  const auto& ext = f.extents();
  const auto& vals = f.values();

  // tight index bounds of the occupied region
  std::vector<int> lo(n, 1 << 30), hi(n, -(1 << 30));
  std::vector<int> idx(n, 0);
  bool any = false;
  for (std::size_t lin = 0; lin < vals.size(); ++lin) {
    if (std::abs(vals[lin]) > t) {
      any = true;
      for (int d = 0; d < n; ++d) {
        lo[d] = std::min(lo[d], idx[d]);
        hi[d] = std::max(hi[d], idx[d]);
      }
    }
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[d] < ext[d]) break;
      idx[d] = 0;
    }
  }
  if (!any) return Shape::empty(n);

  GridMeta meta;
  meta.origin.resize(n);
  meta.spacing.resize(n);
  meta.extents.resize(n);
  std::size_t count = 1;
  for (int d = 0; d < n; ++d) {
    meta.origin[d] = f.origin()[d] + lo[d] * f.spacing()[d];
    meta.spacing[d] = f.spacing()[d];
    meta.extents[d] = hi[d] - lo[d] + 1;
    count *= static_cast<std::size_t>(meta.extents[d]);
  }
  meta.mask.assign(count, 0);
  std::vector<int> sub(n, 0);
  for (std::size_t lin = 0; lin < count; ++lin) {
    std::vector<int> full(n);
    for (int d = 0; d < n; ++d) full[d] = lo[d] + sub[d];
    std::size_t src = 0;
    for (int d = 0; d < n; ++d) src = src * ext[d] + full[d];
    meta.mask[lin] = std::abs(vals[src]) > t ? 1 : 0;
    for (int d = n - 1; d >= 0; --d) {
      if (++sub[d] < meta.extents[d]) break;
      sub[d] = 0;
    }
  }
  return Shape::grid_union(std::move(meta));
}

std::vector<double> distinct_levels(const SampledFunction& f) {
  std::set<double> levels;
  for (double v : f.values())
    if (std::abs(v) > 0.0) levels.insert(std::abs(v));
  return std::vector<double>(levels.begin(), levels.end());
}

Estimate coarea_decompose(const SampledFunction& f, const AlphaContext& ctx,
                          const CoareaSpec& spec) {
  if (ctx.n != f.dim()) throw std::invalid_argument("coarea_decompose: dimension mismatch");
  const double fmax = f.max_abs();
  if (fmax == 0.0) return Estimate::exact(0.0);

  PerimeterSpec pspec;
  pspec.quad = spec.perimeter_quad;

  const std::vector<double> levels = distinct_levels(f);
  if (levels.size() <= spec.exact_level_limit && f.dim() == 1) {
    // P({|f| > t}) is a step function of t: the integral is an exact sum
    double sum = 0.0, err = 0.0;
    double prev = 0.0;
    for (double t : levels) {
      // level set on (prev, t) equals {|f| >= t}
      const double mid = prev + 0.5 * (t - prev);
      Shape level = superlevel_set(f, mid);
      if (!level.is_empty()) {
        const Estimate p = frac_perimeter(level, ctx, PerimeterMethod::quadrature, pspec);
        sum += p.value * (t - prev);
        err += p.error * (t - prev);
      }
      prev = t;
    }
    return Estimate{2.0 * sum, 2.0 * err, Method::quadrature, 0, 0};
  }

  // Gauss quadrature in t with a variation-based error bound
  const auto& [nodes, weights] = gauss_legendre(spec.t_nodes);
  double sum = 0.0, err = 0.0;
  std::vector<double> samples(nodes.size());
  double max_gap = 0.0;
  double prev_t = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double t = 0.5 * fmax * (nodes[i] + 1.0);
    max_gap = std::max(max_gap, t - prev_t);
    prev_t = t;
    Shape level = superlevel_set(f, t);
    double p = 0.0, perr = 0.0;
    if (!level.is_empty()) {
      const Estimate e = frac_perimeter(level, ctx, PerimeterMethod::quadrature, pspec);
      p = e.value;
      perr = e.error;
    }
    samples[i] = p;
    sum += 0.5 * fmax * weights[i] * p;
    err += 0.5 * fmax * weights[i] * perr;
  }
  max_gap = std::max(max_gap, fmax - prev_t);
  double variation = samples.front() + samples.back();
  for (std::size_t i = 0; i + 1 < samples.size(); ++i)
    variation += std::abs(samples[i + 1] - samples[i]);
  err += 0.5 * variation * max_gap;
  return Estimate{2.0 * sum, 2.0 * err, Method::quadrature, 0, 0};
}

}  // namespace fracap
