#pragma once

// Closed-form rank-one update of an orthogonal factorization X = U W.
//
// For X_new = X + a b^T with a outside ran(U), the updated factors are
//
//   U_new = U + (alpha U w + beta q) w^T
//   W_new = W + (U^T a + gamma w) b^T
//
// where q spans the component of a orthogonal to ran(U) and w is the
// normalized -W^{-T} b. U_new is the point at t* on the Grassmann geodesic
// from [U] with velocity q w^T, so both updates are single DGER calls and the
// whole step costs O(np).

#include <optional>
#include <string>
#include <tuple>

#include "grood/detail/update_kernel.hpp"
#include "grood/linalg.hpp"

namespace grood {

using linalg::Matrix;
using linalg::MatrixStructure;
using linalg::Reorthogonalization;
using linalg::Vector;

/// n x p matrix with orthonormal columns.
class OrthonormalFactor {
public:
  static constexpr double kTolerance = 1e-10;

  /// Checks ||U^T U - I||_F <= kTolerance.
  explicit OrthonormalFactor(Matrix mat);

  /// Wraps `mat` without the O(np^2) orthonormality check. For results of
  /// operations that preserve orthonormality by construction.
  static OrthonormalFactor adopt(Matrix mat) noexcept;

  const Matrix& mat() const noexcept { return mat_; }
  std::size_t rows() const noexcept { return mat_.rows(); }
  std::size_t cols() const noexcept { return mat_.cols(); }
  double orthonormality_error() const { return linalg::orthonormality_error(mat_); }

  Matrix release() && { return std::move(mat_); }

private:
  struct Unchecked {};
  OrthonormalFactor(Matrix mat, Unchecked) noexcept : mat_(std::move(mat)) {}
  Matrix mat_;
};

/// X = U W with U orthonormal (n x p) and W regular (p x p).
class Factorization {
public:
  /// Validates shapes, regularity of W and the structure flag.
  Factorization(OrthonormalFactor u, Matrix w,
                MatrixStructure w_kind = MatrixStructure::General);

  static Factorization adopt(OrthonormalFactor u, Matrix w,
                             MatrixStructure w_kind) noexcept;

  const OrthonormalFactor& u() const noexcept { return u_; }
  const Matrix& w() const noexcept { return w_; }
  MatrixStructure w_kind() const noexcept { return w_kind_; }
  std::size_t n() const noexcept { return u_.rows(); }
  std::size_t p() const noexcept { return u_.cols(); }

  /// U W, O(np^2).
  Matrix product() const;

  std::tuple<Matrix, Matrix, MatrixStructure> release() && {
    return {std::move(u_).release(), std::move(w_), w_kind_};
  }

private:
  struct Unchecked {};
  Factorization(OrthonormalFactor u, Matrix w, MatrixStructure kind,
                Unchecked) noexcept
      : u_(std::move(u)), w_(std::move(w)), w_kind_(kind) {}

  OrthonormalFactor u_;
  Matrix w_;
  MatrixStructure w_kind_;
};

struct RankOneUpdate {
  Vector a;  // length n
  Vector b;  // length p
};

using UpdateQuantities = detail::BasicQuantities<double>;

enum class UpdateKind { Generic, InRangeRegular, Deflating, NoOp };

const char* to_string(UpdateKind kind) noexcept;

struct UpdateOptions {
  /// a counts as lying in ran(U) when ||(I - UU^T) a|| <= deflation_tol * max(1, ||a||).
  double deflation_tol = 1e-12;
  /// I_p + x b^T is treated as singular when |1 + b^T x| <= regularity_tol * max(1, ||b|| ||x||).
  double regularity_tol = 1e-10;
  Reorthogonalization reorth = Reorthogonalization::Adaptive;
};

struct UpdateOutcome {
  UpdateKind kind;
  Factorization factorization;
  double distance;  // radians; 0 unless kind == Generic
  std::optional<UpdateQuantities> quantities;
};

UpdateQuantities compute_quantities(const Factorization& f,
                                    const RankOneUpdate& up,
                                    const UpdateOptions& opts = {});

OrthonormalFactor update_u(const OrthonormalFactor& u, const UpdateQuantities& qty);

/// W + (U^T a + gamma w) b^T. U^T a is taken from `qty`; `u` and `up` fix the
/// dimensions.
Matrix update_w(const Matrix& w, const UpdateQuantities& qty,
                const RankOneUpdate& up, const OrthonormalFactor& u);

/// Full dispatch: NoOp for b = 0, the in-range branch when a lies in ran(U)
/// (throws Deflating when the rank would drop), the geodesic update otherwise.
/// Takes `f` by value so callers can move in and have U and W updated in place.
UpdateOutcome grood_update(Factorization f, const RankOneUpdate& up,
                           const UpdateOptions& opts = {});

/// Orthogonal projector onto ran(X + a b^T), built explicitly as an n x n
/// matrix from (U, q) and g = (w_tilde, omega). Verification use only.
Matrix projector_update(const Factorization& f, const RankOneUpdate& up,
                        const UpdateOptions& opts = {});

/// arccos(|omega| / ||g||), the Riemannian distance between [U] and [U_new].
double subspace_distance_from_quantities(const UpdateQuantities& qty);

struct InRangeCheck {
  Vector coeffs;        // x with U W x = U U^T a
  double determinant;   // det(I_p + x b^T) = 1 + b^T x
  bool regular;
};

/// Regularity test for an update whose a lies in ran(U).
InRangeCheck check_in_range_update(const Factorization& f, const Vector& u_t_a,
                                   const Vector& b, double regularity_tol);

}  // namespace grood
