// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#include "fracap/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <thread>

namespace fracap {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) && !(rel_tol > 0.0))
    throw std::invalid_argument("QuadratureSpec: need a positive tolerance");
  if (max_subdivisions < 16)
    throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 16");
  if (!(endpoint_exponent > -1.0))
    throw std::invalid_argument("QuadratureSpec: endpoint exponent must exceed -1");
}

void McSpec::validate() const {
  if (samples < 1) throw std::invalid_argument("McSpec: samples must be >= 1");
  if (chunks < 1) throw std::invalid_argument("McSpec: chunks must be >= 1");
}

namespace {

// QUADPACK (7,15) Gauss-Kronrod pair on [-1,1].
constexpr double kGk15Nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0,
};
constexpr double kGk15Weights[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679,  0.1903505780647854,  0.2044329400752989, 0.2094821410847278,
};
constexpr double kG7Weights[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694,
};

struct PieceResult {
  double value;
  double error;
};

PieceResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kGk15Nodes[i]);
    fv[14 - i] = f(c + h * kGk15Nodes[i]);
  }
  fv[7] = f(c);
  double kron = kGk15Weights[7] * fv[7];
  double gauss = kG7Weights[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    kron += kGk15Weights[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) gauss += kG7Weights[i / 2] * (fv[i] + fv[14 - i]);
  }
  kron *= h;
  gauss *= h;
  return {kron, std::abs(kron - gauss)};
}

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Estimate adapt(const std::function<double(double)>& f, std::vector<Piece> pieces,
               double extra_value, double extra_error, const QuadratureSpec& spec) {
  double total = extra_value;
  double frozen_err = extra_error;  // error that cannot be reduced further
  double active_err = 0.0;
  for (const auto& p : pieces) {
    total += p.value;
    active_err += p.error;
  }
  std::priority_queue<Piece> heap(std::less<Piece>(), std::move(pieces));
  int splits = 0;
  auto tolerance = [&]() { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
  while (active_err + frozen_err > tolerance() && !heap.empty() &&
         splits < spec.max_subdivisions) {
    Piece worst = heap.top();
    heap.pop();
    const double mid = worst.a + 0.5 * (worst.b - worst.a);
    if (!(mid > worst.a) || !(mid < worst.b)) {
      // exhausted at floating resolution; keep its error in the report
      active_err -= worst.error;
      frozen_err += worst.error;
      continue;
    }
    PieceResult left = gk15(f, worst.a, mid);
    PieceResult right = gk15(f, mid, worst.b);
    if (!std::isfinite(left.value + right.value + left.error + right.error)) {
      // a node rounded onto a singular point; keep the parent estimate
      active_err -= worst.error;
      frozen_err += worst.error;
      continue;
    }
    total += left.value + right.value - worst.value;
    active_err += left.error + right.error - worst.error;
    heap.push(Piece{worst.a, mid, left.value, left.error});
    heap.push(Piece{mid, worst.b, right.value, right.error});
    ++splits;
  }
  // roundoff floor: node tables carry ~1e-16 truncation per piece
  const double err = active_err + frozen_err + 2e-15 * std::abs(total);
  // a modest grace factor: an honest error slightly above tolerance is a
  // result, an order-of-magnitude miss is a convergence failure
  if (err > 16.0 * tolerance() && err > spec.abs_tol) {
    Estimate best{total, err, Method::quadrature, 0, 0};
    throw ConvergenceFailure("integrate_1d: tolerance not reached within subdivision budget",
                             best);
  }
  return Estimate{total, err, Method::quadrature, 0, 0};
}

}  // namespace

Estimate integrate_1d(const std::function<double(double)>& f, double a, double b,
                      const QuadratureSpec& spec) {
  spec.validate();
  if (!(a < b)) throw std::invalid_argument("integrate_1d: requires a < b");
  const double gamma = spec.endpoint_exponent;
  std::vector<Piece> pieces;
  double extra_value = 0.0, extra_error = 0.0;
  if (gamma < 0.0) {
    // geometric grading toward both endpoints; the terminal slivers are
    // bounded via the power model f ~ C (t-edge)^gamma (harmless where f is
    // regular: the sliver is then O(width) and still credited to the error).
    const double tol = std::max(spec.abs_tol, 1e-16);
    const int wanted = static_cast<int>(std::ceil(std::log2(std::max(4.0, (b - a) / tol)) /
                                                  (1.0 + gamma)));
    // per-side caps: keep piece widths clear of the endpoint's ulp so the
    // model-sliver midpoints never round onto a singular point
    auto side_cap = [&](double edge) {
      if (edge == 0.0) return 600;  // subdivision limited only by denormals
      const double ulp = 4.0 * 2.2e-16 * std::abs(edge);
      const double limit = std::log2((b - a) / ulp);
      return std::clamp(static_cast<int>(limit) - 2, 8, 600);
    };
    const int levels_a = std::min(std::clamp(wanted, 8, 600), side_cap(a));
    const int levels_b = std::min(std::clamp(wanted, 8, 600), side_cap(b));
    const double mid = a + 0.5 * (b - a);
    double hi = mid;
    for (int j = 1; j < levels_a; ++j) {
      const double lo = a + (b - a) * std::ldexp(1.0, -(j + 1));
      PieceResult r = gk15(f, lo, hi);
      pieces.push_back(Piece{lo, hi, r.value, r.error});
      hi = lo;
    }
    double lo = mid;
    for (int j = 1; j < levels_b; ++j) {
      const double up = b - (b - a) * std::ldexp(1.0, -(j + 1));
      PieceResult r = gk15(f, lo, up);
      pieces.push_back(Piece{lo, up, r.value, r.error});
      lo = up;
    }
    const double wa = (hi - a), wb = (b - lo);
    if (wa > 0.0) {
      const double sliver = f(a + 0.5 * wa) * wa * std::pow(0.5, gamma) / (1.0 + gamma);
      extra_value += sliver;
      extra_error += std::abs(sliver);
    }
    if (wb > 0.0) {
      const double sliver = f(b - 0.5 * wb) * wb * std::pow(0.5, gamma) / (1.0 + gamma);
      extra_value += sliver;
      extra_error += std::abs(sliver);
    }
  } else {
    PieceResult r = gk15(f, a, b);
    pieces.push_back(Piece{a, b, r.value, r.error});
  }
  return adapt(f, std::move(pieces), extra_value, extra_error, spec);
}

Estimate integrate_power_left(const std::function<double(double)>& g, double gamma, double a,
                              double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!(a < b)) throw std::invalid_argument("integrate_power_left: requires a < b");
  if (!(gamma > -1.0)) throw std::invalid_argument("integrate_power_left: gamma must exceed -1");
  const double width = b - a;
  const double m = 1.0 / (1.0 + gamma);
  const double front = std::pow(width, 1.0 + gamma) * m;
  // t = a + width * u^m maps (0,1] onto (a,b]; the weight (t-a)^gamma du
  // collapses to the constant `front`, so the transformed integrand is just
  // front * g(t(u)). g is only ever evaluated at t > a.
  auto transformed = [&](double u) {
    double t = a + width * std::pow(u, m);
    if (!(t > a)) t = a + width * 1e-300;  // guard pow underflow
    return front * g(t);
  };
  std::vector<Piece> pieces;
  // seed mesh refined toward u=1 where the substitution compresses scales
  const double knots[5] = {0.0, 0.5, 0.85, 0.97, 1.0};
  for (int i = 0; i < 4; ++i) {
    PieceResult r = gk15(transformed, knots[i], knots[i + 1]);
    pieces.push_back(Piece{knots[i], knots[i + 1], r.value, r.error});
  }
  return adapt(transformed, std::move(pieces), 0.0, 0.0, spec);
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  std::vector<double> x(order), w(order);
  const int half = (order + 1) / 2;
  constexpr double pi = std::numbers::pi;
  for (int i = 0; i < half; ++i) {
    // Newton from the Chebyshev estimate
    double z = std::cos(pi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[order - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[order - 1 - i] = w[i];
  }
  auto [pos, inserted] = cache.emplace(order, std::make_pair(std::move(x), std::move(w)));
  (void)inserted;
  return pos->second;
}

// ---------------------------------------------------------------------------
// counter RNG

namespace {

constexpr std::uint64_t kPhiloxM = 0xD2B74407B1CE6E93ull;
constexpr std::uint64_t kPhiloxW = 0x9E3779B97F4A7C15ull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t chunk)
    : key_(splitmix(seed ^ splitmix(chunk + 0x517CC1B727220A95ull))) {}

std::uint64_t CounterRng::raw(std::uint64_t c0, std::uint64_t c1) const {
  std::uint64_t key = key_;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi, lo;
    mulhilo(kPhiloxM, c0, hi, lo);
    c0 = hi ^ key ^ c1;
    c1 = lo;
    key += kPhiloxW;
  }
  return c0 ^ c1;
}

double CounterRng::uniform(std::uint64_t sample, unsigned lane) const {
  const std::uint64_t bits = raw(sample, lane);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t sample, unsigned lane) const {
  const double u1 = uniform(sample, 64 + 2 * lane);
  const double u2 = uniform(sample, 64 + 2 * lane + 1);
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));  // 1-u1 in (0,1]
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

// ---------------------------------------------------------------------------
// deterministic chunked Monte Carlo

Estimate mc_mean(const Sampler& sampler, const Integrand& integrand, const McSpec& spec,
                 int workers) {
  spec.validate();
  const std::uint64_t chunks = spec.chunks;
  const std::uint64_t base = spec.samples / chunks;
  const std::uint64_t rem = spec.samples % chunks;

  std::vector<double> sums(chunks, 0.0), sumsqs(chunks, 0.0);

  auto run_chunk = [&](std::uint64_t c) {
    const std::uint64_t count = base + (c < rem ? 1 : 0);
    CounterRng rng(spec.seed, c);
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t i = 0; i < count; ++i) {
      const SamplePoint p = sampler(rng, i);
      const double v = integrand(p);
      s += v;
      s2 += v * v;
    }
    sums[c] = s;
    sumsqs[c] = s2;
  };

  int nworkers = workers > 0 ? workers : 1;
  nworkers = std::min<int>(nworkers, static_cast<int>(chunks));
  if (nworkers <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nworkers);
    pool.reserve(nworkers);
    for (int t = 0; t < nworkers; ++t) {
      pool.emplace_back([&, t]() {
        try {
          for (std::uint64_t c = t; c < chunks; c += nworkers) run_chunk(c);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // merge in chunk order: identical bits for any worker count
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    sum += sums[c];
    sumsq += sumsqs[c];
  }
  const double nsamp = static_cast<double>(spec.samples);
  const double mean = sum / nsamp;
  double stderr_est = 0.0;
  if (spec.samples > 1) {
    const double var = std::max(0.0, (sumsq - sum * sum / nsamp) / (nsamp - 1.0));
    stderr_est = std::sqrt(var / nsamp);
  }
  return Estimate{mean, stderr_est, Method::monte_carlo, spec.samples, spec.seed};
}

// ---------------------------------------------------------------------------
// limit extrapolation

double extrapolate_limit(const std::vector<std::pair<double, double>>& points, int end) {
  if (points.size() < 3)
    throw std::invalid_argument("extrapolate_limit: need at least 3 points");
  if (end != 0 && end != 1) throw std::invalid_argument("extrapolate_limit: end must be 0 or 1");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(points.size());
  for (auto& [alpha, value] : points) {
    sx += alpha;
    sy += value;
    sxx += alpha * alpha;
    sxy += alpha * value;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300)
    throw std::invalid_argument("extrapolate_limit: degenerate alpha grid");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  return end == 0 ? intercept : intercept + slope;
}

double extrapolate_limit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw std::invalid_argument("extrapolate_limit: need at least 3 points");
  double mean = 0.0;
  for (auto& [alpha, value] : points) mean += alpha;
  mean /= static_cast<double>(points.size());
  return extrapolate_limit(points, mean < 0.5 ? 0 : 1);
}

std::string to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

}  // namespace fracap
