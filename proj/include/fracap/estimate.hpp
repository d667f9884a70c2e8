// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FRACAP_ESTIMATE_HPP
#define FRACAP_ESTIMATE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fracap {

enum class Method { exact, quadrature, monte_carlo };

std::string to_string(Method m);

// A numeric result together with its provenance. `error` is a rigorous bound
// for deterministic methods and one standard error for Monte Carlo.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
  Method method = Method::exact;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  static Estimate exact(double v) { return Estimate{v, 0.0, Method::exact, 0, 0}; }

  // Error budget widened to 3 sigma for statistical estimates, so that
  // deterministic and Monte Carlo results can share comparison code.
  double error_budget() const {
    return method == Method::monte_carlo ? 3.0 * error : error;
  }
};

inline Method worse(Method a, Method b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

// value-add with linear error accumulation
inline Estimate operator+(const Estimate& a, const Estimate& b) {
  Estimate r;
  r.value = a.value + b.value;
  r.error = a.error + b.error;
  r.method = worse(a.method, b.method);
  r.samples = a.samples + b.samples;
  r.seed = a.seed != 0 ? a.seed : b.seed;
  return r;
}

inline Estimate operator*(double c, const Estimate& a) {
  Estimate r = a;
  r.value *= c;
  r.error *= c < 0 ? -c : c;
  return r;
}

class UnsupportedOperation : public std::logic_error {
 public:
  explicit UnsupportedOperation(const std::string& what) : std::logic_error(what) {}
};

// Thrown when an adaptive method exhausts its budget; carries the best
// estimate found so that callers can still report it.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& what, const Estimate& best)
      : std::runtime_error(what), best(best) {}
  Estimate best;
};

}  // namespace fracap

#endif
