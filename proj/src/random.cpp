#include "grood/random.hpp"

namespace grood::random {

Vector gaussian_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> dist;
  Vector v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> dist;
  Matrix m(rows, cols);
  for (auto& x : m.span()) x = dist(rng);
  return m;
}

OrthonormalFactor random_orthonormal(std::size_t n, std::size_t p, Rng& rng) {
  return OrthonormalFactor::adopt(linalg::householder_qr(gaussian_matrix(n, p, rng)).q);
}

Factorization random_factorization(std::size_t n, std::size_t p, Rng& rng,
                                   MatrixStructure kind) {
  auto qr = linalg::householder_qr(gaussian_matrix(n, p, rng));
  switch (kind) {
    case MatrixStructure::UpperTriangular:
      break;
    case MatrixStructure::DiagonalTimesOrthogonal: {
      const auto svd = linalg::small_svd(qr.r);
      Matrix w(p, p);
      for (std::size_t j = 0; j < p; ++j)
        for (std::size_t i = 0; i < p; ++i)
          w(i, j) = svd.singular_values[i] * svd.v_factor(j, i);
      return Factorization(
          OrthonormalFactor::adopt(linalg::matmul(qr.q, svd.u_factor)), std::move(w),
          kind);
    }
    case MatrixStructure::General: {
      const Matrix o = linalg::householder_qr(gaussian_matrix(p, p, rng)).q;
      return Factorization(OrthonormalFactor::adopt(linalg::matmul(qr.q, o)),
                           linalg::matmul_tn(o, qr.r), kind);
    }
  }
  return Factorization(OrthonormalFactor::adopt(std::move(qr.q)), std::move(qr.r), kind);
}

RankOneUpdate random_update(std::size_t n, std::size_t p, Rng& rng) {
  Vector a = gaussian_vector(n, rng);
  Vector b = gaussian_vector(p, rng);
  return RankOneUpdate{std::move(a), std::move(b)};
}

}  // namespace grood::random
