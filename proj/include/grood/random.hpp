#pragma once

// Seeded random test instances: Gaussian data, orthonormal factors and
// factorizations X = U W of Gaussian X with QR, SVD or general W.

#include <cstdint>
#include <random>

#include "grood/core.hpp"

namespace grood::random {

using Rng = std::mt19937_64;

Vector gaussian_vector(std::size_t n, Rng& rng);
Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);

/// Q factor of a Gaussian n x p matrix.
OrthonormalFactor random_orthonormal(std::size_t n, std::size_t p, Rng& rng);

/// X = U W for Gaussian X. UpperTriangular gives (Q, R); DiagonalTimesOrthogonal
/// gives (Q U_R, Sigma V^T) from the SVD of R (p <= 64); General gives
/// (Q O, O^T R) for a random orthogonal O.
Factorization random_factorization(std::size_t n, std::size_t p, Rng& rng,
                                   MatrixStructure kind = MatrixStructure::UpperTriangular);

/// Gaussian a and b.
RankOneUpdate random_update(std::size_t n, std::size_t p, Rng& rng);

}  // namespace grood::random
