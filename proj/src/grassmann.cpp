#include "grood/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace grood {

TangentVector::TangentVector(OrthonormalFactor base, Matrix delta)
    : base_(std::move(base)), delta_(std::move(delta)) {
  require_dims(delta_.rows() == base_.rows() && delta_.cols() == base_.cols(),
               "TangentVector: Delta shape differs from base");
  const double off = linalg::frobenius_norm(linalg::matmul_tn(base_.mat(), delta_));
  if (off > kTolerance * linalg::frobenius_norm(delta_)) {
    throw_error(ErrorKind::InvalidArgument,
                "TangentVector: U^T Delta != 0 (" + std::to_string(off) + ")");
  }
}

TangentVector TangentVector::project(OrthonormalFactor base, const Matrix& m) {
  require_dims(m.rows() == base.rows() && m.cols() == base.cols(),
               "TangentVector::project: shape mismatch");
  Matrix delta = m;
  // Two passes keep U^T Delta at rounding level for any m.
  for (int pass = 0; pass < 2; ++pass) {
    const Matrix c = linalg::matmul_tn(base.mat(), delta);
    delta = linalg::add(delta, linalg::matmul(base.mat(), c), -1.0);
  }
  return TangentVector(std::move(base), std::move(delta));
}

RankOneTangent::RankOneTangent(OrthonormalFactor base, Vector q, Vector w, double s)
    : base_(std::move(base)), q_(std::move(q)), w_(std::move(w)), s_(s) {
  require_dims(q_.size() == base_.rows(), "RankOneTangent: q.len != n");
  require_dims(w_.size() == base_.cols(), "RankOneTangent: w.len != p");
  if (!(s_ >= 0.0)) throw_error(ErrorKind::InvalidArgument, "RankOneTangent: s < 0");
  if (std::abs(linalg::nrm2(q_) - 1.0) > 1e-12 ||
      std::abs(linalg::nrm2(w_) - 1.0) > 1e-12) {
    throw_error(ErrorKind::InvalidArgument, "RankOneTangent: q, w must be unit");
  }
  if (linalg::nrm2(linalg::gemv_t(base_.mat(), q_)) > 1e-10) {
    throw_error(ErrorKind::InvalidArgument, "RankOneTangent: U^T q != 0");
  }
}

Matrix RankOneTangent::as_matrix() const {
  return linalg::rank_one_accumulate(Matrix(q_.size(), w_.size()), q_, w_, s_);
}

OrthonormalFactor geodesic_general(const OrthonormalFactor& base,
                                   const TangentVector& delta, double t) {
  require_dims(delta.base().rows() == base.rows() && delta.base().cols() == base.cols(),
               "geodesic_general: tangent vector belongs to another base");
  if (!(delta.base().mat() == base.mat())) {
    throw_error(ErrorKind::InvalidArgument,
                "geodesic_general: tangent vector belongs to another base");
  }
  const std::size_t p = base.cols();
  const auto qr = linalg::householder_qr(delta.delta());
  const auto svd = linalg::small_svd(qr.r);
  const double smax = svd.singular_values[0];
  if (smax == 0.0) return base;

  const Matrix phi = linalg::matmul(qr.q, svd.u_factor);
  const Matrix& psi = svd.v_factor;
  const double cut = static_cast<double>(p) * linalg::kEps * smax;

  Matrix cos_part = psi;  // Psi cos(tS)
  Matrix sin_part = phi;  // Phi sin(tS)
  for (std::size_t k = 0; k < p; ++k) {
    const double s = svd.singular_values[k];
    const double c = s > cut ? std::cos(t * s) : 1.0;
    const double sn = s > cut ? std::sin(t * s) : 0.0;
    linalg::scal(c, cos_part.col(k));
    linalg::scal(sn, sin_part.col(k));
  }
  const Matrix psi_t = linalg::transpose(psi);
  Matrix out = linalg::matmul(base.mat(), linalg::matmul(cos_part, psi_t));
  out = linalg::add(out, linalg::matmul(sin_part, psi_t));
  return OrthonormalFactor::adopt(std::move(out));
}

OrthonormalFactor geodesic_rank1(const RankOneTangent& tv, double t) {
  const Matrix& u = tv.base().mat();
  Vector x = tv.q();
  linalg::scal(std::sin(t * tv.s()), x.span());
  const double c = std::cos(t * tv.s()) - 1.0;
  for (std::size_t j = 0; j < u.cols(); ++j) linalg::axpy(c * tv.w()[j], u.col(j), x.span());
  Matrix out = u;
  linalg::ger(out, 1.0, x, tv.w());
  return OrthonormalFactor::adopt(std::move(out));
}

PrincipalAngles principal_angles(const OrthonormalFactor& u,
                                 const OrthonormalFactor& v) {
  require_dims(u.rows() == v.rows() && u.cols() == v.cols(),
               "principal_angles: U and V must have equal shapes");
  const std::size_t p = u.cols();
  if (p > linalg::kSmallSvdMaxDim) {
    throw_error(ErrorKind::InvalidArgument, "principal_angles: p > 64");
  }

  const Matrix c = linalg::matmul_tn(u.mat(), v.mat());
  const Vector cosines = linalg::small_svd(c).singular_values;  // descending

  const Matrix residual = linalg::add(v.mat(), linalg::matmul(u.mat(), c), -1.0);
  const auto qr = linalg::householder_qr(residual);
  const Vector sines_desc = linalg::small_svd(qr.r).singular_values;

  PrincipalAngles out{Vector(p)};
  for (std::size_t k = 0; k < p; ++k) {
    const double sine = sines_desc[p - 1 - k];
    const double cosine = std::clamp(cosines[k], 0.0, 1.0);
    out.thetas[k] = sine < std::numbers::sqrt2 / 2.0 ? std::asin(sine)
                                                     : std::acos(cosine);
  }
  std::sort(out.thetas.begin(), out.thetas.end());
  return out;
}

double subspace_distance(const OrthonormalFactor& u, const OrthonormalFactor& v) {
  return linalg::nrm2(principal_angles(u, v).thetas);
}

RankOneTangent tangent_from_update(const UpdateQuantities& qty,
                                   const OrthonormalFactor& base) {
  return RankOneTangent(base, qty.q, qty.w_unit, 1.0);
}

}  // namespace grood
