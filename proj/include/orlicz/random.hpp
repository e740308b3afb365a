#pragma once

// Seeded random operators for the verification suites.

#include <cmath>
#include <cstddef>
#include <vector>

#include "orlicz/matrix.hpp"
#include "orlicz/numeric.hpp"

namespace orlicz {

enum class MatrixKind { dense, diagonal, diagonal_psd };

inline Matrix random_matrix(Rng& rng, std::size_t dim, MatrixKind kind = MatrixKind::dense) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (kind == MatrixKind::dense) {
      for (std::size_t j = 0; j < dim; ++j) m(i, j) = rng.normal();
    } else {
      const double x = rng.normal();
      m(i, i) = kind == MatrixKind::diagonal_psd ? std::abs(x) : x;
    }
  }
  return m;
}

/// Haar-ish orthogonal matrix from Gram-Schmidt on a Gaussian matrix.
inline Matrix random_orthogonal(Rng& rng, std::size_t dim) {
  Matrix q(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    std::vector<double> w(dim);
    double nrm = 0.0;
    do {
      for (double& x : w) x = rng.normal();
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t c = 0; c < j; ++c) {
          double d = 0.0;
          for (std::size_t i = 0; i < dim; ++i) d += q(i, c) * w[i];
          for (std::size_t i = 0; i < dim; ++i) w[i] -= d * q(i, c);
        }
      nrm = 0.0;
      for (double x : w) nrm += x * x;
      nrm = std::sqrt(nrm);
    } while (nrm < 1e-6);
    for (std::size_t i = 0; i < dim; ++i) q(i, j) = w[i] / nrm;
  }
  return q;
}

}  // namespace orlicz
