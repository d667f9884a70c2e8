// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#include "fracap/perimeter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace fracap {

namespace {

constexpr double kTinyRho = 1e-300;

double kernel_value(const double* h, int n, double alpha) {
  double r2 = 0.0;
  for (int d = 0; d < n; ++d) r2 += h[d] * h[d];
  return std::pow(r2, -0.5 * (n + alpha));
}

// Gauss-Legendre rule mapped to [0,1].
struct UnitRule {
  std::vector<double> x, w;
};

UnitRule unit_rule(int order) {
  const auto& [nodes, weights] = gauss_legendre(order);
  UnitRule r;
  r.x.resize(order);
  r.w.resize(order);
  for (int i = 0; i < order; ++i) {
    r.x[i] = 0.5 * (nodes[i] + 1.0);
    r.w[i] = 0.5 * weights[i];
  }
  return r;
}

// odometer increment over per-axis ranges [lo_d, hi_d); returns false on wrap
bool advance(std::vector<int>& idx, const std::vector<int>& lo, const std::vector<int>& hi) {
  for (int d = static_cast<int>(idx.size()) - 1; d >= 0; --d) {
    if (++idx[d] < hi[d]) return true;
    idx[d] = lo[d];
  }
  return false;
}

}  // namespace

namespace detail {

namespace {

// multilinear evaluation of a lattice field at an arbitrary offset; both
// interpolation weights come from direct subtractions so they keep full
// relative precision even within an ulp of a lattice plane
double field_eval(const LatticeField& f, const double* h) {
  int base[16];
  double w1[16], w0[16];
  for (int d = 0; d < f.n; ++d) {
    const double u = h[d] / f.spacing[d];
    double fl = std::floor(u);
    base[d] = static_cast<int>(fl);
    w1[d] = u - fl;
    w0[d] = (fl + 1.0) - u;
  }
  double acc = 0.0;
  const int corners = 1 << f.n;
  int k[16];
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    for (int d = 0; d < f.n; ++d) {
      const int bit = (c >> d) & 1;
      w *= bit ? w1[d] : w0[d];
      k[d] = base[d] + bit;
    }
    if (w != 0.0) acc += w * f.corner(k);
  }
  return acc;
}

// integral over the complement of the table box, assuming field == asymptote
// there: asymptote * int_{R^n \ T} |h|^{-n-alpha} dh
Estimate outside_box_integral(const LatticeField& f, const AlphaContext& ctx) {
  const int n = f.n;
  const double alpha = ctx.alpha;
  double a[16];
  double rc2 = 0.0;
  for (int d = 0; d < n; ++d) {
    a[d] = f.kmax[d] * f.spacing[d];
    rc2 += a[d] * a[d];
  }
  const double rc = std::sqrt(rc2);
  const double tail = f.asymptote * kernel_tail(ctx, rc);
  if (n == 1) return Estimate::exact(f.asymptote * kernel_tail(ctx, a[0]));

  // ball(rc) minus box correction: int over directions of
  // (rhomax(theta)^{-alpha} - rc^{-alpha}) / alpha
  auto direction_term = [&](const double* dir) {
    double rhomax = std::numeric_limits<double>::infinity();
    for (int d = 0; d < n; ++d)
      if (dir[d] > 0.0) rhomax = std::min(rhomax, a[d] / dir[d]);
    return (std::pow(rhomax, -alpha) - std::pow(rc, -alpha)) / alpha;
  };

  double corr = 0.0, corr_err = 0.0;
  if (n == 2) {
    const double split = std::atan2(a[1], a[0]);
    const UnitRule rule = unit_rule(20);
    double sum = 0.0;
    const double arcs[2][2] = {{0.0, split}, {split, 0.5 * std::numbers::pi}};
    for (auto& arc : arcs) {
      const double len = arc[1] - arc[0];
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double th = arc[0] + len * rule.x[i];
        double dir[2] = {std::cos(th), std::sin(th)};
        sum += len * rule.w[i] * direction_term(dir);
      }
    }
    corr = 4.0 * sum;  // four symmetric quadrants of the symmetric table box
    corr_err = std::abs(corr) * 1e-12;
  } else {
    // octant product rule, doubled for an error estimate
    auto octant_integral = [&](int order) {
      const UnitRule rule = unit_rule(order);
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double c = rule.x[i];  // cos(phi) in [0,1]
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
          const double th = 0.5 * std::numbers::pi * rule.x[j];
          double dir[16] = {};
          dir[0] = s * std::cos(th);
          dir[1] = s * std::sin(th);
          dir[2] = c;
          sum += rule.w[i] * rule.w[j] * 0.5 * std::numbers::pi * direction_term(dir);
        }
      }
      return sum;
    };
    if (n != 3)
      throw UnsupportedOperation("lattice_kernel_integral: lattice masks supported for n <= 3");
    const double coarse = octant_integral(12);
    const double fine = octant_integral(24);
    corr = 8.0 * fine;
    corr_err = 8.0 * std::abs(fine - coarse);
  }
  Estimate out = Estimate::exact(tail + f.asymptote * corr);
  out.error = f.asymptote * corr_err;
  out.method = Method::quadrature;
  return out;
}

// exact segmentwise integration for 1-D fields (piecewise linear times kernel)
Estimate lattice_integral_1d(const LatticeField& f, const AlphaContext& ctx) {
  const double alpha = ctx.alpha;
  const double dx = f.spacing[0];
  double total = 0.0, roundoff = 0.0;
  for (int side = -1; side <= 1; side += 2) {
    for (int k = 0; k < f.kmax[0]; ++k) {
      const int ia = side * k, ib = side * (k + 1);
      const double fa = f.corner(&ia), fb = f.corner(&ib);
      const double a = k * dx, b = (k + 1) * dx;
      const double c1 = (fb - fa) / dx;
      const double c0 = fa - c1 * a;
      double term = c1 * (std::pow(b, 1.0 - alpha) - std::pow(a, 1.0 - alpha)) / (1.0 - alpha);
      if (k == 0) {
        if (std::abs(c0) > 1e-12 * (std::abs(fb) + 1.0))
          throw std::invalid_argument("lattice_kernel_integral: field(0) must vanish");
      } else {
        term += c0 * (std::pow(a, -alpha) - std::pow(b, -alpha)) / alpha;
      }
      total += term;
      roundoff += std::abs(term) * 1e-14;
    }
  }
  Estimate out{total, roundoff, Method::quadrature, 0, 0};
  return out + outside_box_integral(f, ctx);
}

// polar integration over the 2^n cells adjacent to the origin
Estimate near_cells_polar(const LatticeField& f, const AlphaContext& ctx,
                          const QuadratureSpec& spec) {
  const int n = f.n;
  const double alpha = ctx.alpha;
  QuadratureSpec ray_spec = spec;
  ray_spec.abs_tol = std::max(spec.abs_tol * 1e-2, 1e-300);
  ray_spec.max_subdivisions = 200;

  double total = 0.0, err = 0.0;
  auto ray_contribution = [&](const double* dir, double rhomax) {
    auto g = [&](double rho) {
      double h[16];
      for (int d = 0; d < n; ++d) h[d] = rho * dir[d];
      return field_eval(f, h) / rho;
    };
    return integrate_power_left(g, -alpha, 0.0, rhomax, ray_spec);
  };

  if (n == 2) {
    const UnitRule rule = unit_rule(16);
    for (int sx = -1; sx <= 1; sx += 2)
      for (int sy = -1; sy <= 1; sy += 2) {
        const double split = std::atan2(f.spacing[1], f.spacing[0]);
        const double arcs[2][2] = {{0.0, split}, {split, 0.5 * std::numbers::pi}};
        for (auto& arc : arcs) {
          const double len = arc[1] - arc[0];
          for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double th = arc[0] + len * rule.x[i];
            const double ct = std::cos(th), st = std::sin(th);
            double dir[2] = {sx * ct, sy * st};
            const double rhomax = std::min(f.spacing[0] / ct, f.spacing[1] / st);
            Estimate e = ray_contribution(dir, rhomax);
            total += len * rule.w[i] * e.value;
            err += len * rule.w[i] * e.error;
          }
        }
      }
  } else if (n == 3) {
    // the radial cap rhomax(direction) kinks where the boundary face switches;
    // two product orders bound the resulting angular error
    const double theta_split = std::atan2(f.spacing[1], f.spacing[0]);
    auto octants_pass = [&](int order, double& pass_err) {
      const UnitRule rule = unit_rule(order);
      const double arcs[2][2] = {{0.0, theta_split}, {theta_split, 0.5 * std::numbers::pi}};
      double sum = 0.0;
      for (int sx = -1; sx <= 1; sx += 2)
        for (int sy = -1; sy <= 1; sy += 2)
          for (int sz = -1; sz <= 1; sz += 2)
            for (std::size_t i = 0; i < rule.x.size(); ++i) {
              const double c = rule.x[i];
              const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
              for (auto& arc : arcs) {
                const double len = arc[1] - arc[0];
                for (std::size_t j = 0; j < rule.x.size(); ++j) {
                  const double th = arc[0] + len * rule.x[j];
                  const double dx = s * std::cos(th), dy = s * std::sin(th), dz = c;
                  double dir[3] = {sx * dx, sy * dy, sz * dz};
                  double rhomax = f.spacing[2] / std::max(dz, 1e-14);
                  rhomax = std::min(rhomax, f.spacing[0] / std::max(dx, 1e-14));
                  rhomax = std::min(rhomax, f.spacing[1] / std::max(dy, 1e-14));
                  Estimate e = ray_contribution(dir, rhomax);
                  const double w = rule.w[i] * rule.w[j] * len;
                  sum += w * e.value;
                  pass_err += w * e.error;
                }
              }
            }
      return sum;
    };
    double coarse_err = 0.0;
    const double coarse = octants_pass(8, coarse_err);
    double fine_err = 0.0;
    const double fine = octants_pass(12, fine_err);
    total = fine;
    err = fine_err + std::abs(fine - coarse);
  } else {
    throw UnsupportedOperation("lattice_kernel_integral: lattice masks supported for n <= 3");
  }
  return Estimate{total, err, Method::quadrature, 0, 0};
}

}  // namespace

Estimate lattice_kernel_integral(const LatticeField& field, const AlphaContext& ctx,
                                 const QuadratureSpec& near_spec) {
  if (field.n != ctx.n)
    throw std::invalid_argument("lattice_kernel_integral: dimension mismatch");
  if (field.n == 1) return lattice_integral_1d(field, ctx);

  const int n = field.n;
  Estimate total = near_cells_polar(field, ctx, near_spec);

  // far cells: tensor Gauss per lattice cell, multilinear corner interpolation
  static const UnitRule r2 = unit_rule(2);
  static const UnitRule r4 = unit_rule(4);
  static const UnitRule r6 = unit_rule(6);
  static const UnitRule r8 = unit_rule(8);

  std::vector<int> lo(n), hi(n), idx(n);
  for (int d = 0; d < n; ++d) {
    lo[d] = -field.kmax[d];
    hi[d] = field.kmax[d];
    idx[d] = lo[d];
  }
  double cellvol = 1.0;
  double max_spacing = 0.0;
  for (int d = 0; d < n; ++d) {
    cellvol *= field.spacing[d];
    max_spacing = std::max(max_spacing, field.spacing[d]);
  }

  double far_sum = 0.0, far_err = 0.0;
  int k[16];
  double corner_vals[1 << 3];
  do {
    bool near_cell = true;
    for (int d = 0; d < n; ++d)
      if (idx[d] != -1 && idx[d] != 0) near_cell = false;
    if (near_cell) continue;

    // cell [idx*dx, (idx+1)*dx); distance from origin decides the order
    double dmin2 = 0.0;
    for (int d = 0; d < n; ++d) {
      const double e0 = idx[d] * field.spacing[d];
      const double e1 = (idx[d] + 1) * field.spacing[d];
      const double m = (e0 > 0.0) ? e0 : (e1 < 0.0 ? -e1 : 0.0);
      dmin2 += m * m;
    }
    const double dmin = std::sqrt(dmin2);
    const UnitRule* rule = &r4;
    if (dmin < 3.0 * max_spacing)
      rule = &r8;
    else if (dmin < 8.0 * max_spacing)
      rule = &r6;

    const int corners = 1 << n;
    for (int c = 0; c < corners; ++c) {
      for (int d = 0; d < n; ++d) k[d] = idx[d] + ((c >> d) & 1);
      corner_vals[c] = field.corner(k);
    }

    auto cell_quad = [&](const UnitRule& rr) {
      double sum = 0.0;
      std::vector<int> q(n, 0);
      const int order = static_cast<int>(rr.x.size());
      while (true) {
        double w = 1.0;
        double h[16];
        double tloc[16];
        for (int d = 0; d < n; ++d) {
          w *= rr.w[q[d]];
          tloc[d] = rr.x[q[d]];
          h[d] = (idx[d] + tloc[d]) * field.spacing[d];
        }
        double fval = 0.0;
        for (int c = 0; c < corners; ++c) {
          double cw = 1.0;
          for (int d = 0; d < n; ++d) {
            const int bit = (c >> d) & 1;
            cw *= bit ? tloc[d] : 1.0 - tloc[d];
          }
          fval += cw * corner_vals[c];
        }
        sum += w * fval * kernel_value(h, n, ctx.alpha);
        int d = n - 1;
        for (; d >= 0; --d) {
          if (++q[d] < order) break;
          q[d] = 0;
        }
        if (d < 0) break;
      }
      return sum * cellvol;
    };

    const double hi_val = cell_quad(*rule);
    const double lo_val = cell_quad(r2);
    far_sum += hi_val;
    far_err += std::abs(hi_val - lo_val);
  } while (advance(idx, lo, hi));

  Estimate far{far_sum, far_err, Method::quadrature, 0, 0};
  return total + far + outside_box_integral(field, ctx);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// covariogram engines

namespace {

using detail::LatticeField;

// dense table of pair counts N(k) for a lattice occupancy mask
struct LatticeDeficit {
  int n = 0;
  double spacing[16];
  int kmax[16];          // table covers |k_d| <= kmax_d
  std::vector<double> counts;  // N(k), dense, index over (2*e_d - 1) per axis
  std::vector<int> table_extent;
  double cellvol = 1.0;
  double occupied = 0.0;
  double volume = 0.0;

  std::size_t table_index(const int* k) const {
    std::size_t lin = 0;
    for (int d = 0; d < n; ++d) lin = lin * table_extent[d] + (k[d] + table_extent[d] / 2);
    return lin;
  }

  double count(const int* k) const {
    for (int d = 0; d < n; ++d)
      if (k[d] < -table_extent[d] / 2 || k[d] > table_extent[d] / 2) return 0.0;
    return counts[table_index(k)];
  }

  double corner_deficit(const int* k) const { return (occupied - count(k)) * cellvol; }

  double deficit_at(const double* h) const {
    int base[16];
    double w1[16], w0[16];
    for (int d = 0; d < n; ++d) {
      const double u = h[d] / spacing[d];
      const double fl = std::floor(u);
      base[d] = static_cast<int>(fl);
      w1[d] = u - fl;
      w0[d] = (fl + 1.0) - u;
    }
    double acc = 0.0;
    int k[16];
    for (int c = 0; c < (1 << n); ++c) {
      double w = 1.0;
      for (int d = 0; d < n; ++d) {
        const int bit = (c >> d) & 1;
        w *= bit ? w1[d] : w0[d];
        k[d] = base[d] + bit;
      }
      if (w != 0.0) acc += w * corner_deficit(k);
    }
    return acc;
  }
};

LatticeDeficit build_lattice_deficit(const GridMeta& g) {
  LatticeDeficit L;
  L.n = g.dim();
  L.cellvol = 1.0;
  for (int d = 0; d < L.n; ++d) {
    L.spacing[d] = g.spacing[d];
    L.kmax[d] = g.extents[d];
    L.cellvol *= g.spacing[d];
  }
  L.table_extent.resize(L.n);
  std::size_t tsize = 1;
  for (int d = 0; d < L.n; ++d) {
    L.table_extent[d] = 2 * g.extents[d] - 1;
    tsize *= static_cast<std::size_t>(L.table_extent[d]);
  }
  L.counts.assign(tsize, 0.0);

  // occupied cell list
  std::vector<std::vector<int>> occ;
  std::vector<int> idx(L.n, 0);
  const std::size_t total = g.cell_count();
  for (std::size_t lin = 0; lin < total; ++lin) {
    if (g.mask[lin]) occ.push_back(idx);
    for (int d = L.n - 1; d >= 0; --d) {
      if (++idx[d] < g.extents[d]) break;
      idx[d] = 0;
    }
  }
  L.occupied = static_cast<double>(occ.size());
  L.volume = L.occupied * L.cellvol;

  if (L.n == 1) {
    // runs decomposition keeps 1-D masks cheap even at fine resolution
    std::vector<std::pair<int, int>> runs;
    for (std::size_t i = 0; i < occ.size();) {
      std::size_t j = i;
      while (j + 1 < occ.size() && occ[j + 1][0] == occ[j][0] + 1) ++j;
      runs.push_back({occ[i][0], occ[j][0]});
      i = j + 1;
    }
    for (int k = -(L.table_extent[0] / 2); k <= L.table_extent[0] / 2; ++k) {
      double c = 0.0;
      for (auto& r : runs)
        for (auto& s : runs)
          c += std::max(0, std::min(r.second, s.second + k) - std::max(r.first, s.first + k) + 1);
      L.counts[L.table_index(&k)] = c;
    }
  } else {
    int k[16];
    for (const auto& a : occ)
      for (const auto& b : occ) {
        for (int d = 0; d < L.n; ++d) k[d] = b[d] - a[d];
        L.counts[L.table_index(k)] += 1.0;
      }
  }
  return L;
}

// kink breakpoints of the box-union covariogram per axis
std::vector<std::vector<double>> union_breakpoints(const std::vector<BoxGeom>& boxes, int n) {
  std::vector<std::vector<double>> breaks(n);
  for (int d = 0; d < n; ++d) {
    auto& bd = breaks[d];
    bd.push_back(0.0);
    for (const auto& b : boxes) {
      bd.push_back(b.side(d));
      bd.push_back(-b.side(d));
    }
    for (std::size_t i = 0; i < boxes.size(); ++i)
      for (std::size_t j = 0; j < boxes.size(); ++j) {
        if (i == j) continue;
        bd.push_back(boxes[i].lo[d] - boxes[j].lo[d]);
        bd.push_back(boxes[i].lo[d] - boxes[j].hi[d]);
        bd.push_back(boxes[i].hi[d] - boxes[j].lo[d]);
        bd.push_back(boxes[i].hi[d] - boxes[j].hi[d]);
      }
    std::sort(bd.begin(), bd.end());
    bd.erase(std::unique(bd.begin(), bd.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             bd.end());
  }
  return breaks;
}

// sphere average of the deficit for box-like shapes, kink-aware in 2-D
class BoxesAverager {
 public:
  BoxesAverager(const Shape& s, int n) : shape_(s), n_(n) {
    if (auto* b = std::get_if<BoxGeom>(&s.variant()))
      breaks_ = union_breakpoints({*b}, n);
    else if (auto* u = std::get_if<BoxUnionGeom>(&s.variant()))
      breaks_ = union_breakpoints(u->boxes, n);
  }

  double operator()(double rho) const {
    if (n_ == 1) {
      const double hpos = rho, hneg = -rho;
      return shape_.covariogram_deficit(&hpos) + shape_.covariogram_deficit(&hneg);
    }
    if (n_ == 2) return average_2d(rho);
    return average_3d(rho);
  }

 private:
  double average_2d(double rho) const {
    // kink angles where rho*cos(theta) or rho*sin(theta) crosses a breakpoint
    std::vector<double> angles{0.0, 2.0 * std::numbers::pi};
    auto push = [&](double th) {
      th = std::fmod(th, 2.0 * std::numbers::pi);
      if (th < 0) th += 2.0 * std::numbers::pi;
      angles.push_back(th);
    };
    for (double v : breaks_[0])
      if (std::abs(v) < rho) {
        const double t = std::acos(v / rho);
        push(t);
        push(2.0 * std::numbers::pi - t);
      }
    for (double v : breaks_[1])
      if (std::abs(v) < rho) {
        const double t = std::asin(v / rho);
        push(t);
        push(std::numbers::pi - t);
      }
    std::sort(angles.begin(), angles.end());
    static const UnitRule rule = unit_rule(8);
    double sum = 0.0;
    double h[2];
    for (std::size_t a = 0; a + 1 < angles.size(); ++a) {
      const double len = angles[a + 1] - angles[a];
      if (len < 1e-15) continue;
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double th = angles[a] + len * rule.x[i];
        h[0] = rho * std::cos(th);
        h[1] = rho * std::sin(th);
        sum += len * rule.w[i] * shape_.covariogram_deficit(h);
      }
    }
    return sum;
  }

  double average_3d(double rho) const {
    static const UnitRule rule = unit_rule(14);
    double sum = 0.0;
    double h[3];
    for (int sx = -1; sx <= 1; sx += 2)
      for (int sy = -1; sy <= 1; sy += 2)
        for (int sz = -1; sz <= 1; sz += 2)
          for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double c = rule.x[i];
            const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            for (std::size_t j = 0; j < rule.x.size(); ++j) {
              const double th = 0.5 * std::numbers::pi * rule.x[j];
              h[0] = rho * sx * s * std::cos(th);
              h[1] = rho * sy * s * std::sin(th);
              h[2] = rho * sz * c;
              sum += rule.w[i] * rule.w[j] * 0.5 * std::numbers::pi *
                     shape_.covariogram_deficit(h);
            }
          }
    return sum;
  }

  const Shape& shape_;
  int n_;
  std::vector<std::vector<double>> breaks_;
};

// radial deficit with an interpolation table for balls with n >= 4 (keeps the
// per-sample Monte Carlo cost flat)
class RadialDeficit {
 public:
  RadialDeficit(const Shape& s, bool tabulate) {
    if (auto* i = std::get_if<IntervalGeom>(&s.variant())) {
      length_ = i->length();
      is_interval_ = true;
      return;
    }
    const auto& b = std::get<BallGeom>(s.variant());
    n_ = s.dim();
    radius_ = b.radius;
    if (n_ >= 4 && tabulate) {
      const int m = 8192;
      table_.resize(m + 1);
      for (int i = 0; i <= m; ++i)
        table_[i] = ball_self_deficit(n_, radius_, 2.0 * radius_ * i / m);
    }
  }

  double operator()(double d) const {
    if (is_interval_) return std::min(d, length_);
    if (!table_.empty()) {
      if (d >= 2.0 * radius_) return table_.back();
      const double u = d / (2.0 * radius_) * (table_.size() - 1);
      const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(u), table_.size() - 2);
      const double t = u - static_cast<double>(i);
      return (1.0 - t) * table_[i] + t * table_[i + 1];
    }
    return ball_self_deficit(n_, radius_, d);
  }

 private:
  bool is_interval_ = false;
  double length_ = 0.0;
  int n_ = 1;
  double radius_ = 0.0;
  std::vector<double> table_;
};

Estimate quadrature_perimeter(const Shape& s, const AlphaContext& ctx,
                              const PerimeterSpec& spec) {
  const int n = ctx.n;
  const double alpha = ctx.alpha;
  const double R = s.diameter_bound();
  const double volume = s.volume().value;

  if (std::holds_alternative<IndicatorGeom>(s.variant()))
    throw UnsupportedOperation(
        "frac_perimeter: indicator sets have no quadrature path, use monte-carlo");

  if (auto* u = std::get_if<BoxUnionGeom>(&s.variant()); u && u->grid) {
    LatticeDeficit L = build_lattice_deficit(*u->grid);
    LatticeField field;
    field.n = n;
    for (int d = 0; d < n; ++d) {
      field.spacing[d] = L.spacing[d];
      field.kmax[d] = L.kmax[d];
    }
    field.asymptote = L.volume;
    field.corner = [&L](const int* k) { return L.corner_deficit(k); };
    return detail::lattice_kernel_integral(field, ctx, spec.quad);
  }

  // radial split: near field by graded quadrature, far field analytic
  Estimate near;
  if (std::holds_alternative<IntervalGeom>(s.variant()) ||
      std::holds_alternative<BallGeom>(s.variant())) {
    RadialDeficit deficit(s, false);
    auto g = [&](double rho) { return deficit(rho) / rho; };
    near = sphere_area(n) * integrate_power_left(g, -alpha, 0.0, R, spec.quad);
  } else {
    BoxesAverager avg(s, n);
    auto g = [&](double rho) { return avg(std::max(rho, kTinyRho)) / rho; };
    near = integrate_power_left(g, -alpha, 0.0, R, spec.quad);
  }
  return near + Estimate::exact(volume * kernel_tail(ctx, R));
}

Estimate mc_perimeter(const Shape& s, const AlphaContext& ctx, const PerimeterSpec& spec) {
  const int n = ctx.n;
  const double alpha = ctx.alpha;
  const double R = s.diameter_bound();
  const double eps0 = std::min(spec.importance_eps0, 0.5 * (1.0 - alpha));
  const double expo = 1.0 - alpha - eps0;
  const double m = 1.0 / expo;
  const double weight_c = sphere_area(n) * std::pow(R, expo) / expo;

  const bool oracle = std::holds_alternative<IndicatorGeom>(s.variant());
  if (oracle && n > 8)
    throw UnsupportedOperation("frac_perimeter: indicator Monte Carlo limited to n <= 8");

  // Bernoulli deficits (membership oracles) make the raw weight
  // rho^{eps0-1} heavy-tailed near 0; truncating the radial draw at rho_min
  // keeps the variance finite, and the omitted shell is bounded by
  // deficit <= V so it moves into the error budget.
  const double rho_min = oracle ? 1e-3 * R : 0.0;
  const double u_floor = oracle ? std::pow(rho_min / R, expo) : 0.0;

  // pointwise deficit for shapes with closed covariogram forms
  std::optional<LatticeDeficit> lattice;
  std::optional<RadialDeficit> radial;
  if (auto* u = std::get_if<BoxUnionGeom>(&s.variant()); u && u->grid)
    lattice = build_lattice_deficit(*u->grid);
  else if (std::holds_alternative<IntervalGeom>(s.variant()) ||
           std::holds_alternative<BallGeom>(s.variant()))
    radial = RadialDeficit(s, true);

  auto deficit_eval = [&](const double* h) {
    if (lattice) return lattice->deficit_at(h);
    if (radial) {
      double r2 = 0.0;
      for (int d = 0; d < n; ++d) r2 += h[d] * h[d];
      return (*radial)(std::sqrt(r2));
    }
    return s.covariogram_deficit(h);
  };

  const BoxGeom bb = s.bounding_box();
  const double bbvol = bb.volume();

  auto sampler = [&](const CounterRng& rng, std::uint64_t i) {
    SamplePoint p;
    const int base = oracle ? n : 0;
    p.dim = base + n;
    if (oracle)
      for (int d = 0; d < n; ++d)
        p.x[d] = bb.lo[d] + (bb.hi[d] - bb.lo[d]) * rng.uniform(i, 32 + d);
    const double u = u_floor + (1.0 - u_floor) * rng.uniform(i, 31);
    const double rho = R * std::pow(std::max(u, 1e-300), m);
    double dir[16];
    double norm2 = 0.0;
    for (int d = 0; d < n; ++d) {
      dir[d] = rng.normal(i, d);
      norm2 += dir[d] * dir[d];
    }
    const double norm = std::sqrt(norm2);
    for (int d = 0; d < n; ++d)
      p.x[base + d] = norm > 1e-150 ? rho * dir[d] / norm : (d == 0 ? rho : 0.0);
    return p;
  };

  auto integrand = [&](const SamplePoint& p) {
    const int base = oracle ? n : 0;
    const double* h = p.x + base;
    double rho2 = 0.0;
    for (int d = 0; d < n; ++d) rho2 += h[d] * h[d];
    const double rho = std::sqrt(rho2);
    double deficit;
    if (oracle) {
      if (!s.contains_raw(p.x)) return 0.0;
      double y[16];
      for (int d = 0; d < n; ++d) y[d] = p.x[d] + h[d];
      deficit = s.contains_raw(y) ? 0.0 : bbvol;
    } else {
      deficit = deficit_eval(h);
    }
    return deficit * std::pow(rho, eps0 - 1.0) * weight_c * (1.0 - u_floor);
  };

  Estimate near = mc_mean(sampler, integrand, spec.mc, spec.workers);
  if (oracle) {
    // the omitted shell (0, rho_min) carries mass ~ slope * rho_min^{1-alpha};
    // calibrate the deficit slope on [rho_min, 2 rho_min] and correct
    auto shell_sampler = [&](const CounterRng& rng, std::uint64_t i) {
      SamplePoint p;
      p.dim = 2 * n;
      for (int d = 0; d < n; ++d)
        p.x[d] = bb.lo[d] + (bb.hi[d] - bb.lo[d]) * rng.uniform(i, 32 + d);
      const double rho = rho_min * (1.0 + rng.uniform(i, 31));
      double dir[16];
      double norm2 = 0.0;
      for (int d = 0; d < n; ++d) {
        dir[d] = rng.normal(i, d);
        norm2 += dir[d] * dir[d];
      }
      const double norm = std::sqrt(norm2);
      for (int d = 0; d < n; ++d)
        p.x[n + d] = norm > 1e-150 ? rho * dir[d] / norm : (d == 0 ? rho : 0.0);
      return p;
    };
    auto shell_integrand = [&](const SamplePoint& p) {
      if (!s.contains_raw(p.x)) return 0.0;
      double y[16];
      double rho2 = 0.0;
      for (int d = 0; d < n; ++d) {
        y[d] = p.x[d] + p.x[n + d];
        rho2 += p.x[n + d] * p.x[n + d];
      }
      if (s.contains_raw(y)) return 0.0;
      return bbvol / std::sqrt(rho2);
    };
    McSpec shell_spec = spec.mc;
    shell_spec.samples = std::max<std::uint64_t>(spec.mc.samples / 2, 1);
    shell_spec.seed = spec.mc.seed ^ 0xC2B2AE3D27D4EB4FULL;
    const Estimate slope = mc_mean(shell_sampler, shell_integrand, shell_spec, spec.workers);
    const double moment = std::pow(rho_min, 1.0 - alpha) / (1.0 - alpha);
    const double omitted = sphere_area(n) * slope.value * moment;
    near.value += omitted;
    near.error += sphere_area(n) * slope.error * moment + 0.1 * std::abs(omitted);
  }

  Estimate vol;
  if (oracle && !std::get<IndicatorGeom>(s.variant()).volume_hint) {
    McSpec vspec = spec.mc;
    vspec.seed = spec.mc.seed ^ 0x5DEECE66DULL;  // independent substream
    vol = s.volume(vspec);
  } else {
    vol = s.volume();
  }
  const double tail = kernel_tail(ctx, R);
  Estimate far{vol.value * tail, vol.error * tail, vol.method, vol.samples, spec.mc.seed};
  Estimate out = near + far;
  out.method = Method::monte_carlo;
  out.seed = spec.mc.seed;
  return out;
}

}  // namespace

Estimate frac_perimeter(const Shape& s, const AlphaContext& ctx, PerimeterMethod method,
                        const PerimeterSpec& spec) {
  if (s.dim() != ctx.n) throw std::invalid_argument("frac_perimeter: dimension mismatch");
  if (s.is_empty()) return Estimate::exact(0.0);
  if (method == PerimeterMethod::automatic)
    method = std::holds_alternative<IndicatorGeom>(s.variant()) ? PerimeterMethod::monte_carlo
                                                                : PerimeterMethod::quadrature;
  return method == PerimeterMethod::quadrature ? quadrature_perimeter(s, ctx, spec)
                                               : mc_perimeter(s, ctx, spec);
}

Estimate frac_perimeter_indicator_seminorm(const Shape& s, const AlphaContext& ctx,
                                           PerimeterMethod method, const PerimeterSpec& spec) {
  return 2.0 * frac_perimeter(s, ctx, method, spec);
}

double sharp_kappa(const AlphaContext& ctx, const PerimeterSpec& spec) {
  const Estimate p_ball =
      frac_perimeter(Shape::ball(ctx.n, 1.0), ctx, PerimeterMethod::quadrature, spec);
  return kappa(ctx, p_ball.value);
}

namespace {

LimitScanResult scan(const Shape& s, std::vector<double> grid, int end, double target,
                     const PerimeterSpec& spec) {
  if (grid.empty())
    grid = end == 0 ? std::vector<double>{0.02, 0.01, 0.005}
                    : std::vector<double>{0.98, 0.99, 0.995};
  if (grid.size() < 3)
    throw std::invalid_argument("limit scan: need at least 3 grid points");
  for (double a : grid) {
    const bool wrong_side = end == 0 ? !(a > 0.0 && a < 0.5) : !(a > 0.5 && a < 1.0);
    if (wrong_side)
      throw std::invalid_argument("limit scan: grid must approach the requested endpoint");
  }
  LimitScanResult r;
  std::vector<std::pair<double, double>> points;
  for (double a : grid) {
    AlphaContext ctx(s.dim(), a);
    const Estimate p = frac_perimeter(s, ctx, PerimeterMethod::automatic, spec);
    const double scaledv = (end == 0 ? a : 1.0 - a) * p.value;
    r.alphas.push_back(a);
    r.scaled_values.push_back(scaledv);
    points.push_back({a, scaledv});
  }
  r.extrapolated = extrapolate_limit(points, end);
  r.target = target;
  r.rel_err = std::abs(r.extrapolated - target) / std::abs(target);
  return r;
}

}  // namespace

LimitScanResult limit_alpha0_check(const Shape& s, std::vector<double> alpha_grid,
                                   const PerimeterSpec& spec) {
  const double target = sphere_area(s.dim()) * s.volume().value;
  return scan(s, std::move(alpha_grid), 0, target, spec);
}

LimitScanResult limit_alpha1_check(const Shape& s, std::vector<double> alpha_grid,
                                   const PerimeterSpec& spec) {
  const double target = 0.5 * tau(s.dim()) * s.classical_perimeter();
  return scan(s, std::move(alpha_grid), 1, target, spec);
}

}  // namespace fracap
