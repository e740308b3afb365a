#pragma once

// Singular values by one-sided (Hestenes) Jacobi, and the spectral traces the
// norms are built from.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "orlicz/matrix.hpp"
#include "orlicz/numeric.hpp"
#include "orlicz/orlicz_function.hpp"

namespace orlicz {

/// Singular values s_1 >= s_2 >= ... >= 0.
class SingularSpectrum {
 public:
  SingularSpectrum() = default;

  explicit SingularSpectrum(std::vector<double> values) : values_(std::move(values)) {
    for (double& v : values_) {
      if (v < 0.0 && v > -tol::svd_clamp) v = 0.0;
      if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("SingularSpectrum: values must be finite and >= 0");
    }
    if (!std::is_sorted(values_.begin(), values_.end(), std::greater<>()))
      throw std::invalid_argument("SingularSpectrum: values must be nonincreasing");
  }

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  double largest() const { return values_.empty() ? 0.0 : values_.front(); }
  bool is_zero() const { return largest() == 0.0; }
  double sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

 private:
  std::vector<double> values_;
};

/// T = U diag(s) V^T with orthogonal U, V.
struct SingularValueDecomposition {
  Matrix u;
  SingularSpectrum s;
  Matrix v;
};

namespace detail {

inline void complete_orthonormal_columns(Matrix& u, const std::vector<bool>& valid) {
  const std::size_t n = u.dim();
  std::vector<bool> have = valid;
  std::size_t candidate = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (have[k]) continue;
    while (candidate < n) {
      std::vector<double> w(n, 0.0);
      w[candidate++] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t j = 0; j < n; ++j) {
          if (!have[j]) continue;
          double d = 0.0;
          for (std::size_t i = 0; i < n; ++i) d += u(i, j) * w[i];
          for (std::size_t i = 0; i < n; ++i) w[i] -= d * u(i, j);
        }
      double nrm = 0.0;
      for (double x : w) nrm += x * x;
      nrm = std::sqrt(nrm);
      if (nrm > 1e-8) {
        for (std::size_t i = 0; i < n; ++i) u(i, k) = w[i] / nrm;
        have[k] = true;
        break;
      }
    }
  }
}

}  // namespace detail

/// One-sided Jacobi SVD. Sweeps until the off-diagonal part of T^T T drops to
/// 1e-13 ||T||_F^2 or no rotation fires; throws ConvergenceError after 100 sweeps.
inline SingularValueDecomposition svd(const Matrix& t) {
  const std::size_t n = t.dim();
  Matrix a = t;
  Matrix v = Matrix::identity(n);
  const double fro2 = t.frobenius() * t.frobenius();

  bool converged = false;
  for (int sweep = 0; sweep < tol::svd_max_sweeps; ++sweep) {
    double off = 0.0;
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          alpha += a(k, i) * a(k, i);
          beta += a(k, j) * a(k, j);
          gamma += a(k, i) * a(k, j);
        }
        off += gamma * gamma;
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double tn = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + tn * tn);
        const double s = c * tn;
        for (std::size_t k = 0; k < n; ++k) {
          const double ai = a(k, i), aj = a(k, j);
          a(k, i) = c * ai - s * aj;
          a(k, j) = s * ai + c * aj;
          const double vi = v(k, i), vj = v(k, j);
          v(k, i) = c * vi - s * vj;
          v(k, j) = s * vi + c * vj;
        }
        rotated = true;
      }
    }
    if (!rotated || std::sqrt(off) <= tol::svd_offdiag * fro2) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ConvergenceError("svd: Jacobi sweeps did not converge within 100 sweeps");

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) s2 += a(k, j) * a(k, j);
    sigma[j] = std::sqrt(s2);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  Matrix u(n), vs(n);
  std::vector<double> sorted(n);
  std::vector<bool> valid(n, false);
  const double floor = kEps * (sigma.empty() ? 0.0 : sigma[order[0]]) * static_cast<double>(n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t j = order[c];
    sorted[c] = sigma[j];
    for (std::size_t k = 0; k < n; ++k) vs(k, c) = v(k, j);
    if (sigma[j] > floor && sigma[j] > 0.0) {
      for (std::size_t k = 0; k < n; ++k) u(k, c) = a(k, j) / sigma[j];
      valid[c] = true;
    }
  }
  detail::complete_orthonormal_columns(u, valid);
  return {std::move(u), SingularSpectrum(std::move(sorted)), std::move(vs)};
}

inline SingularSpectrum singular_values(const Matrix& t) { return svd(t).s; }

inline double operator_norm(const Matrix& t) { return singular_values(t).largest(); }

/// sum_k phi(lambda * s_k). Overflow yields +inf.
inline double modular_trace(const OrliczFunction& phi, std::span<const double> spectrum, double lambda) {
  double total = 0.0;
  for (double s : spectrum) {
    if (s == 0.0) continue;
    total += phi(lambda * s);
  }
  return total;
}

inline double modular_trace(const OrliczFunction& phi, const SingularSpectrum& s, double lambda) {
  return modular_trace(phi, s.values(), lambda);
}

inline double modular_trace(const OrliczFunction& phi, const Matrix& t, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("modular_trace: lambda must be > 0");
  return modular_trace(phi, singular_values(t), lambda);
}

/// tr|TB|, the trace norm of the product.
inline double abs_product_trace(const Matrix& t, const Matrix& b) {
  detail::require_same_dim(t, b, "abs_product_trace");
  return singular_values(matmul(t, b)).sum();
}

/// V diag(b) U^T for the decomposition T = U diag(s) V^T, so that
/// tr|T B| = sum_k s_k b_k for b >= 0.
inline Matrix aligned_operator(const SingularValueDecomposition& d, std::span<const double> b) {
  const std::size_t n = d.u.dim();
  if (b.size() != n) throw std::invalid_argument("aligned_operator: coefficient count must equal dim");
  Matrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double x = 0.0;
      for (std::size_t k = 0; k < n; ++k) x += d.v(i, k) * b[k] * d.u(j, k);
      r(i, j) = x;
    }
  return r;
}

}  // namespace orlicz
