#pragma once

// Grassmann-manifold utilities: geodesics, principal angles and the Riemannian
// subspace distance. These serve as the independent checks for core.hpp.

#include "grood/core.hpp"

namespace grood {

/// Tangent vector Delta at [U]: U^T Delta = 0.
class TangentVector {
public:
  static constexpr double kTolerance = 1e-10;

  /// Checks ||U^T Delta||_F <= kTolerance * ||Delta||_F.
  TangentVector(OrthonormalFactor base, Matrix delta);

  /// (I - U U^T) m, the orthogonal projection of m onto the tangent space.
  static TangentVector project(OrthonormalFactor base, const Matrix& m);

  const OrthonormalFactor& base() const noexcept { return base_; }
  const Matrix& delta() const noexcept { return delta_; }

private:
  OrthonormalFactor base_;
  Matrix delta_;
};

/// Rank-one tangent vector Delta = q s w^T with unit q orthogonal to ran(U)
/// and unit w.
class RankOneTangent {
public:
  RankOneTangent(OrthonormalFactor base, Vector q, Vector w, double s);

  const OrthonormalFactor& base() const noexcept { return base_; }
  const Vector& q() const noexcept { return q_; }
  const Vector& w() const noexcept { return w_; }
  double s() const noexcept { return s_; }

  Matrix as_matrix() const;

private:
  OrthonormalFactor base_;
  Vector q_;
  Vector w_;
  double s_;
};

struct PrincipalAngles {
  Vector thetas;  // radians, ascending in [0, pi/2]
};

/// Point at time t on the geodesic from [base] with velocity delta. Uses
/// Delta = Phi S Psi^T obtained from a thin QR of Delta and the SVD of its
/// p x p triangular factor; p <= 64.
OrthonormalFactor geodesic_general(const OrthonormalFactor& base,
                                   const TangentVector& delta, double t);

/// U + ((cos(ts) - 1) U w + sin(ts) q) w^T, O(np).
OrthonormalFactor geodesic_rank1(const RankOneTangent& tv, double t);

/// Principal angles between ran(U) and ran(V), ascending. Angles below pi/4
/// come from the sines (singular values of V - U U^T V), the rest from the
/// cosines (singular values of U^T V), so small angles keep full accuracy.
PrincipalAngles principal_angles(const OrthonormalFactor& u,
                                 const OrthonormalFactor& v);

/// Euclidean norm of the principal-angle vector.
double subspace_distance(const OrthonormalFactor& u, const OrthonormalFactor& v);

/// Delta = q w^T with s = 1 from the update quantities.
RankOneTangent tangent_from_update(const UpdateQuantities& qty,
                                   const OrthonormalFactor& base);

}  // namespace grood
