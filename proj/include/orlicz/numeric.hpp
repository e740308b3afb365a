#pragma once

// Scalar root finding, unimodal minimization and seeded randomness shared by
// the rest of the library.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

namespace orlicz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Raised when an iterative method exhausts its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace tol {
inline constexpr double inverse = 1e-12;       // relative, on phi(u) - v
inline constexpr double bracket_growth = 4.0;  // geometric bracket expansion
inline constexpr double golden = 1e-10;        // relative width on k
inline constexpr double svd_offdiag = 1e-13;   // relative to ||T||_F^2
inline constexpr double svd_clamp = 1e-12;
inline constexpr int svd_max_sweeps = 100;
}  // namespace tol

/// (a^p + b^p)^(1/p), or max(a, b) for p = inf. Scaled to avoid overflow.
inline double p_aggregate(double a, double b, double p) {
  if (std::isinf(p)) return std::max(a, b);
  const double m = std::max(a, b);
  if (m == 0.0) return 0.0;
  if (std::isinf(m)) return kInf;
  return m * std::pow(std::pow(a / m, p) + std::pow(b / m, p), 1.0 / p);
}

/// Conjugate exponent p/(p-1) with 1 <-> inf.
inline double conjugate_exponent(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInf;
  return p / (p - 1.0);
}

/// 1/p with 1/inf = 0.
inline double reciprocal(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

/// Smallest u >= 0 with f(u) >= target for a nondecreasing f, by geometric
/// bracket expansion from `guess` followed by bisection to machine precision.
template <class F>
double solve_nondecreasing(F&& f, double target, double guess = 1.0) {
  if (!(target > 0.0)) return 0.0;
  if (!(guess > 0.0) || !std::isfinite(guess)) guess = 1.0;
  double lo = guess;
  double hi = guess;
  if (f(hi) < target) {
    while (f(hi) < target) {
      lo = hi;
      hi *= tol::bracket_growth;
      if (hi > 1e300) throw std::overflow_error("solve_nondecreasing: target out of representable range");
    }
  } else {
    lo = hi / tol::bracket_growth;
    while (f(lo) >= target) {
      hi = lo;
      lo /= tol::bracket_growth;
      if (lo < 1e-300) return 0.0;
    }
  }
  // invariant: f(lo) < target <= f(hi)
  for (int it = 0; it < 400 && hi - lo > 2.0 * kEps * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < target) lo = mid; else hi = mid;
  }
  return hi;
}

struct MinimumPoint {
  double x;
  double value;
};

/// Golden-section search for the minimum of a unimodal f on [a, b].
template <class F>
MinimumPoint golden_section(F&& f, double a, double b, double rel_tol) {
  constexpr double invphi = 0.6180339887498948482;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  MinimumPoint best = fc <= fd ? MinimumPoint{c, fc} : MinimumPoint{d, fd};
  for (int it = 0; it < 500; ++it) {
    if (std::abs(b - a) <= rel_tol * std::max(1.0, std::abs(c) + std::abs(d))) break;
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
      if (fc < best.value) best = {c, fc};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
      if (fd < best.value) best = {d, fd};
    }
  }
  return best;
}

/// Deterministic generator with hand-rolled distributions so that streams are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  /// Independent stream for (seed, index); used to make per-trial seeds.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    return mix(seed ^ mix(index + 0x9e3779b97f4a7c15ULL));
  }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace orlicz
