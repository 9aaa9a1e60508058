#pragma once

// Test helpers and independent oracles. Nothing here calls the update code.

#include <cmath>
#include <cstdint>
#include <vector>

#include "grood/core.hpp"
#include "grood/linalg.hpp"
#include "grood/random.hpp"

namespace grood::test {

using linalg::Matrix;
using linalg::Vector;

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(xs.size());
  std::size_t i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Matrix column(std::initializer_list<double> xs) {
  Matrix m(xs.size(), 1);
  std::size_t i = 0;
  for (double x : xs) m(i++, 0) = x;
  return m;
}

/// X + a b^T, entry by entry.
inline Matrix plus_outer(const Matrix& x, const Vector& a, const Vector& b) {
  Matrix out = x;
  for (std::size_t j = 0; j < x.cols(); ++j)
    for (std::size_t i = 0; i < x.rows(); ++i) out(i, j) += a[i] * b[j];
  return out;
}

/// Orthonormal basis of ran(X) by modified Gram-Schmidt, applied twice.
inline Matrix mgs_basis(const Matrix& x) {
  Matrix q = x;
  const std::size_t n = q.rows();
  for (std::size_t j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) r += q(i, k) * q(i, j);
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= r * q(i, k);
      }
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += q(i, j) * q(i, j);
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= nrm;
  }
  return q;
}

/// Q Q^T as an explicit n x n matrix.
inline Matrix projector(const Matrix& q) {
  const std::size_t n = q.rows();
  Matrix p(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < q.cols(); ++k) s += q(i, k) * q(j, k);
      p(i, j) = s;
    }
  return p;
}

/// Orthogonal projector onto ran(X), via Gram-Schmidt.
inline Matrix range_projector(const Matrix& x) { return projector(mgs_basis(x)); }

/// ||U U^T - V V^T||_F / sqrt(2) = ||sin(Theta)||_2.
inline double projector_sine_distance(const Matrix& u, const Matrix& v) {
  return linalg::frobenius_distance(projector(u), projector(v)) / std::sqrt(2.0);
}

/// Singular values of [[a, b], [c, d]] from the characteristic polynomial of A^T A.
inline std::pair<double, double> singular_values_2x2(double a, double b, double c,
                                                     double d) {
  const double t = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det * det));
  return {std::sqrt((t + disc) / 2.0), std::sqrt(std::max(0.0, (t - disc) / 2.0))};
}

/// n=2, p=1: U = e1, W = [1], a = e2, b = (1).
inline Factorization hand_factorization() {
  return Factorization(OrthonormalFactor(column({1.0, 0.0})), Matrix{{1.0}});
}
inline RankOneUpdate hand_update() { return RankOneUpdate{vec({0.0, 1.0}), vec({1.0})}; }

inline random::Rng rng_for(std::uint64_t seed) { return random::Rng(seed); }

}  // namespace grood::test
