#pragma once

// Classical reference methods for the rank-one update: the SVD-style update
// through the (p+1) x p matrix K, the QR-style update with Givens rotations,
// the coordinate-change update for W = I, refactorization from scratch, and
// the Wedderburn rank-reduction classification.

#include <cstddef>
#include <optional>

#include "grood/core.hpp"

namespace grood {

/// K = [W + (U^T a) b^T ; ||q_tilde|| b^T], shape (p+1) x p, with X + a b^T = (U, q) K.
struct AugmentedFactor {
  Matrix mat;
  Vector q;  // unit residual direction
};

/// Builds K for an update with a outside ran(U). Throws ZeroB or InRange.
AugmentedFactor augmented_factor(const Factorization& f, const RankOneUpdate& up,
                                 const UpdateOptions& opts = {});

struct BrandResult {
  OrthonormalFactor u;
  Matrix w;  // Sigma V^T of K
};

/// (U, q) U_K where K = U_K Sigma V^T; O(np^2). Requires p <= 63.
OrthonormalFactor brand_update(const Factorization& f, const RankOneUpdate& up,
                               const UpdateOptions& opts = {});
BrandResult brand_update_factorization(const Factorization& f,
                                       const RankOneUpdate& up,
                                       const UpdateOptions& opts = {});

struct KaufmanResult {
  OrthonormalFactor u;
  Matrix r;               // p x p upper triangular
  std::size_t rotations;  // Givens rotations actually applied
};

/// Reduces K to upper-trapezoidal form with Givens rotations: the top p x p
/// block is triangularized column by column, then the appended row is
/// eliminated against the diagonal from column 1 to p. Zero entries are
/// skipped, so an already triangular top block costs at most p rotations.
KaufmanResult kaufman_update(const Factorization& f, const RankOneUpdate& up,
                             const UpdateOptions& opts = {});

/// U_new = U + v w^T for X = U (W = I) with w = b / ||b|| and
/// v = ((1 + a^T U b) / (||q_tilde|| ||g||) - 1) U w + (||b|| / ||g||) q.
OrthonormalFactor elementary_update(const OrthonormalFactor& u,
                                    const RankOneUpdate& up,
                                    const UpdateOptions& opts = {});

/// Householder QR of X: U = Q, W = R. RankDeficient when some
/// |R_kk| < max(n, p) * eps * ||X||_F.
Factorization full_refactor(const Matrix& x);

enum class RangeClass { OutOfRange, InRangeRegular, InRangeDeflating };

const char* to_string(RangeClass kind) noexcept;

struct UpdateClassification {
  RangeClass kind;
  std::optional<Vector> coeffs;  // x with a = X x, when a lies in ran(X)
};

/// OutOfRange when ||(I - UU^T) a|| > tol ||a||; otherwise x = W^{-1} U^T a and
/// the update deflates iff I + x b^T is singular, i.e. 1 + b^T x = 0.
UpdateClassification wedderburn_classify(const Factorization& f,
                                         const RankOneUpdate& up,
                                         double tol = 1e-10);

}  // namespace grood
