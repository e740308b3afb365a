#pragma once

// Luxemburg, Orlicz (Amemiya form) and Schatten norms of single operators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "orlicz/matrix.hpp"
#include "orlicz/numeric.hpp"
#include "orlicz/orlicz_function.hpp"
#include "orlicz/spectral.hpp"

namespace orlicz {

enum class NormMethod { bisection, amemiya, closed_form, dual_search };

inline const char* to_string(NormMethod m) {
  switch (m) {
    case NormMethod::bisection: return "bisection";
    case NormMethod::amemiya: return "amemiya";
    case NormMethod::closed_form: return "closed_form";
    case NormMethod::dual_search: return "dual_search";
  }
  return "unknown";
}

struct NormResult {
  double value = 0.0;
  NormMethod method = NormMethod::closed_form;
  double residual = 0.0;
};

/// inf{lambda > 0 : sum_k phi(s_k / lambda) <= 1}. Root of the modular in
/// mu = 1/lambda by Illinois regula falsi, falling back to bisection when an
/// endpoint is infinite or the bracket stalls. The returned lambda always
/// satisfies the modular constraint.
inline NormResult luxemburg_norm(const OrliczFunction& phi, std::span<const double> spectrum) {
  const double s1 = spectrum.empty() ? 0.0 : *std::max_element(spectrum.begin(), spectrum.end());
  if (s1 == 0.0) return {0.0, NormMethod::closed_form, 0.0};
  auto g = [&](double mu) { return modular_trace(phi, spectrum, mu) - 1.0; };

  const auto n = static_cast<double>(spectrum.size());
  double lo = inverse(phi, 1.0 / n) / s1;  // mu with g(lo) <= 0
  double hi = inverse(phi, n) / s1;        // mu with g(hi) > 0
  if (!(lo > 0.0) || !std::isfinite(lo)) lo = 1.0 / s1;
  if (!(hi > 0.0) || !std::isfinite(hi)) hi = 1.0 / s1;
  if (hi < lo) std::swap(lo, hi);
  double glo = g(lo), ghi = g(hi);
  for (int i = 0; glo > 0.0; ++i) {
    hi = lo, ghi = glo;
    lo /= tol::bracket_growth;
    glo = g(lo);
    if (i > 1000) throw std::overflow_error("luxemburg_norm: modular does not fall below 1");
  }
  for (int i = 0; ghi <= 0.0; ++i) {
    lo = hi, glo = ghi;
    hi *= tol::bracket_growth;
    ghi = g(hi);
    if (i > 1000) return {0.0, NormMethod::bisection, 0.0};
  }
  // invariant: g(lo) <= 0 < g(hi)
  int side = 0;
  for (int it = 0; it < 400 && hi - lo > 2.0 * kEps * hi; ++it) {
    const double width = hi - lo;
    double mid = std::isfinite(ghi) ? lo - glo * (hi - lo) / (ghi - glo) : 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm <= 0.0) {
      lo = mid, glo = gm;
      if (side == -1) ghi *= 0.5;
      side = -1;
    } else {
      hi = mid, ghi = gm;
      if (side == 1) glo *= 0.5;
      side = 1;
    }
    if (hi - lo > 0.5 * width && it % 4 == 3) {
      const double b = 0.5 * (lo + hi);
      const double gb = g(b);
      if (gb <= 0.0) lo = b, glo = gb; else hi = b, ghi = gb;
      side = 0;
    }
  }
  const double lambda = 1.0 / lo;
  return {lambda, NormMethod::bisection, std::min(std::abs(g(lo)), (hi - lo) / hi)};
}

inline NormResult luxemburg_norm(const OrliczFunction& phi, const SingularSpectrum& s) {
  return luxemburg_norm(phi, s.values());
}

inline NormResult luxemburg_norm(const OrliczFunction& phi, const Matrix& t) {
  return luxemburg_norm(phi, singular_values(t));
}

/// (sum_k s_k^p)^{1/p}; the largest singular value for p = inf.
inline double schatten_norm(double p, std::span<const double> spectrum) {
  if (!(p >= 1.0)) throw std::invalid_argument("schatten_norm: p must be >= 1");
  const double s1 = spectrum.empty() ? 0.0 : *std::max_element(spectrum.begin(), spectrum.end());
  if (s1 == 0.0 || std::isinf(p)) return s1;
  double sum = 0.0;
  for (double s : spectrum) sum += std::pow(s / s1, p);
  return s1 * std::pow(sum, 1.0 / p);
}

inline double schatten_norm(double p, const SingularSpectrum& s) { return schatten_norm(p, s.values()); }
inline double schatten_norm(double p, const Matrix& t) { return schatten_norm(p, singular_values(t)); }

/// inf_{k>0} (1 + sum_j phi(k s_j)) / k, located by golden-section search on
/// log k after doubling out a bracket. When the objective is still falling at
/// k = 2^60 / s_1 (linear growth, e.g. u^1) the value there is the limit.
inline NormResult orlicz_norm(const OrliczFunction& phi, std::span<const double> spectrum) {
  const double s1 = spectrum.empty() ? 0.0 : *std::max_element(spectrum.begin(), spectrum.end());
  if (s1 == 0.0) return {0.0, NormMethod::closed_form, 0.0};
  auto h = [&](double logk) {
    const double k = std::exp(logk);
    return (1.0 + modular_trace(phi, spectrum, k)) / k;
  };
  const double step = std::log(2.0);
  const double base = -std::log(s1);
  int j = 0;
  double hj = h(base);
  // Walk downhill one octave at a time until the objective turns up.
  if (h(base + step) < hj) {
    while (true) {
      const double next = h(base + (j + 1) * step);
      if (!(next < hj)) break;
      ++j;
      hj = next;
      if (j >= 60) return {hj, NormMethod::amemiya, std::exp(-(base + j * step))};
    }
  } else {
    while (true) {
      const double next = h(base + (j - 1) * step);
      if (!(next < hj)) break;
      --j;
      hj = next;
      if (j <= -60) throw std::overflow_error("orlicz_norm: no bracket within 2^60 of 1/s_1");
    }
  }
  const double a = base + (j - 1) * step, c = base + (j + 1) * step;
  const auto best = golden_section(h, a, c, tol::golden);
  return {std::min(best.value, hj), NormMethod::amemiya, tol::golden};
}

inline NormResult orlicz_norm(const OrliczFunction& phi, const SingularSpectrum& s) { return orlicz_norm(phi, s.values()); }
inline NormResult orlicz_norm(const OrliczFunction& phi, const Matrix& t) { return orlicz_norm(phi, singular_values(t)); }

namespace detail {

/// sum s_k b_k / ||b||_(psi): the pairing value of the direction b scaled onto
/// the unit sphere of the Luxemburg norm of psi.
inline double dual_score(const OrliczFunction& psi, std::span<const double> s, std::span<const double> b) {
  double pairing = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) pairing += s[k] * b[k];
  if (pairing <= 0.0) return 0.0;
  const double nb = luxemburg_norm(psi, b).value;
  return nb > 0.0 ? pairing / nb : 0.0;
}

}  // namespace detail

/// Lower estimate of sup{tr|TB| : tr psi(B) <= 1} over B diagonal in the
/// singular basis of T. Candidates: the Young-equality family b = p(t s),
/// random directions, then coordinate ascent on the best. Deterministic in
/// (budget, seed).
inline double orlicz_norm_dual_search(const OrliczFunction& phi, std::span<const double> spectrum, int budget,
                                      std::uint64_t seed) {
  const double s1 = spectrum.empty() ? 0.0 : *std::max_element(spectrum.begin(), spectrum.end());
  if (s1 == 0.0) return 0.0;
  const OrliczFunction psi = conjugate(phi);
  const std::size_t n = spectrum.size();
  std::vector<double> best_b(n, 0.0);
  double best = 0.0;
  int used = 0;
  auto consider = [&](const std::vector<double>& b) {
    ++used;
    const double v = detail::dual_score(psi, spectrum, b);
    if (v > best) best = v, best_b = b;
  };

  std::vector<double> b(n);
  for (int i = -20; i <= 20 && used < budget; ++i) {
    const double t = std::exp2(0.5 * i) / s1;
    for (std::size_t k = 0; k < n; ++k) b[k] = phi.left_deriv(t * spectrum[k]);
    consider(b);
  }
  Rng rng(seed);
  const int random_budget = used + (budget - used) / 2;
  while (used < random_budget) {
    const double power = rng.uniform(0.0, 3.0);
    for (std::size_t k = 0; k < n; ++k) b[k] = rng.uniform() * std::pow(spectrum[k] / s1, power);
    consider(b);
  }
  double delta = 0.25;
  while (used < budget && delta > 1e-12) {
    bool improved = false;
    for (std::size_t k = 0; k < n && used < budget; ++k)
      for (double sign : {1.0, -1.0}) {
        b = best_b;
        b[k] = std::max(0.0, b[k] * (1.0 + sign * delta) + (b[k] == 0.0 && sign > 0 ? delta : 0.0));
        const double before = best;
        consider(b);
        improved = improved || best > before;
      }
    if (!improved) delta *= 0.5;
  }
  return best;
}

inline double orlicz_norm_dual_search(const OrliczFunction& phi, const Matrix& t, int budget, std::uint64_t seed) {
  return orlicz_norm_dual_search(phi, singular_values(t).values(), budget, seed);
}

}  // namespace orlicz
