#include "grood/core.hpp"

#include <cmath>

namespace grood {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularW: return "SingularW";
    case ErrorKind::InRange: return "InRange";
    case ErrorKind::ZeroB: return "ZeroB";
    case ErrorKind::Deflating: return "Deflating";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

const char* to_string(UpdateKind kind) noexcept {
  switch (kind) {
    case UpdateKind::Generic: return "Generic";
    case UpdateKind::InRangeRegular: return "InRangeRegular";
    case UpdateKind::Deflating: return "Deflating";
    case UpdateKind::NoOp: return "NoOp";
  }
  return "Unknown";
}

OrthonormalFactor::OrthonormalFactor(Matrix mat) : mat_(std::move(mat)) {
  require_dims(mat_.rows() > 0 && mat_.cols() > 0, "OrthonormalFactor: empty");
  require_dims(mat_.cols() <= mat_.rows(), "OrthonormalFactor: p > n");
  if (!linalg::all_finite(mat_.span())) {
    throw_error(ErrorKind::InvalidArgument, "OrthonormalFactor: non-finite entry");
  }
  const double err = linalg::orthonormality_error(mat_);
  if (!(err <= kTolerance)) {
    throw_error(ErrorKind::InvalidArgument,
                "OrthonormalFactor: ||U^T U - I||_F = " + std::to_string(err));
  }
}

OrthonormalFactor OrthonormalFactor::adopt(Matrix mat) noexcept {
  return OrthonormalFactor(std::move(mat), Unchecked{});
}

Factorization::Factorization(OrthonormalFactor u, Matrix w,
                             MatrixStructure w_kind)
    : u_(std::move(u)), w_(std::move(w)), w_kind_(w_kind) {
  const std::size_t p = u_.cols();
  require_dims(w_.rows() == p && w_.cols() == p,
               "Factorization: W must be p x p with p = U.cols");
  if (!linalg::all_finite(w_.span())) {
    throw_error(ErrorKind::InvalidArgument, "Factorization: non-finite W");
  }
  const double wmax = linalg::max_abs(w_);
  switch (w_kind_) {
    case MatrixStructure::UpperTriangular:
      for (std::size_t j = 0; j < p; ++j)
        for (std::size_t i = j + 1; i < p; ++i)
          if (w_(i, j) != 0.0) {
            throw_error(ErrorKind::InvalidArgument,
                        "Factorization: W flagged upper triangular is not");
          }
      break;
    case MatrixStructure::DiagonalTimesOrthogonal: {
      const Matrix g = linalg::matmul(w_, linalg::transpose(w_));
      for (std::size_t j = 0; j < p; ++j)
        for (std::size_t i = 0; i < p; ++i)
          if (i != j && std::abs(g(i, j)) > 1e-10 * wmax * wmax) {
            throw_error(ErrorKind::InvalidArgument,
                        "Factorization: W flagged Sigma V^T has non-orthogonal rows");
          }
      break;
    }
    case MatrixStructure::General:
      break;
  }
  // Regularity: the same pivot test the update's solve applies.
  (void)linalg::solve_transposed(w_, Vector(p, 1.0), w_kind_);
}

Factorization Factorization::adopt(OrthonormalFactor u, Matrix w,
                                   MatrixStructure w_kind) noexcept {
  return Factorization(std::move(u), std::move(w), w_kind, Unchecked{});
}

Matrix Factorization::product() const { return linalg::matmul(u_.mat(), w_); }

namespace {

void check_update_dims(const Factorization& f, const RankOneUpdate& up) {
  require_dims(up.a.size() == f.n(), "update: a.len != n");
  require_dims(up.b.size() == f.p(), "update: b.len != p");
}

}  // namespace

UpdateQuantities compute_quantities(const Factorization& f,
                                    const RankOneUpdate& up,
                                    const UpdateOptions& opts) {
  check_update_dims(f, up);
  return detail::compute_quantities(f.u().mat(), f.w(), f.w_kind(), up.a, up.b,
                                    opts.deflation_tol, opts.reorth);
}

OrthonormalFactor update_u(const OrthonormalFactor& u, const UpdateQuantities& qty) {
  Matrix out = u.mat();
  detail::apply_u_update(out, qty);
  return OrthonormalFactor::adopt(std::move(out));
}

Matrix update_w(const Matrix& w, const UpdateQuantities& qty,
                const RankOneUpdate& up, const OrthonormalFactor& u) {
  require_dims(up.a.size() == u.rows() && up.b.size() == u.cols(),
               "update_w: update does not match U");
  require_dims(w.rows() == u.cols() && w.cols() == u.cols(),
               "update_w: W must be p x p");
  Matrix out = w;
  detail::apply_w_update(out, qty, up.b);
  return out;
}

InRangeCheck check_in_range_update(const Factorization& f, const Vector& u_t_a,
                                   const Vector& b, double regularity_tol) {
  require_dims(u_t_a.size() == f.p() && b.size() == f.p(),
               "in-range check: dimension mismatch");
  // W x = U^T a, via the transposed solve on W^T.
  Vector neg(u_t_a.size());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -u_t_a[i];
  InRangeCheck out;
  out.coeffs = linalg::solve_transposed(linalg::transpose(f.w()), neg);
  out.determinant = 1.0 + linalg::dot(b, out.coeffs);
  const double scale = std::max(1.0, linalg::nrm2(b) * linalg::nrm2(out.coeffs));
  out.regular = std::abs(out.determinant) > regularity_tol * scale;
  return out;
}

UpdateOutcome grood_update(Factorization f, const RankOneUpdate& up,
                           const UpdateOptions& opts) {
  check_update_dims(f, up);
  if (detail::is_zero(up.b)) {
    return UpdateOutcome{UpdateKind::NoOp, std::move(f), 0.0, std::nullopt};
  }

  auto res = linalg::orthogonal_residual(f.u().mat(), up.a, opts.reorth);
  if (!(res.norm > detail::deflation_threshold(opts.deflation_tol, res.a_norm))) {
    const InRangeCheck check =
        check_in_range_update(f, res.coeffs, up.b, opts.regularity_tol);
    if (!check.regular) {
      throw_error(ErrorKind::Deflating,
                  "deflating update: rank of X + ab^T drops (1 + b^T x = " +
                      std::to_string(check.determinant) + ")");
    }
    auto [u, w, kind] = std::move(f).release();
    (void)kind;
    linalg::ger(w, 1.0, res.coeffs, up.b);
    return UpdateOutcome{
        UpdateKind::InRangeRegular,
        Factorization::adopt(OrthonormalFactor::adopt(std::move(u)), std::move(w),
                             MatrixStructure::General),
        0.0, std::nullopt};
  }

  UpdateQuantities qty =
      detail::quantities_from_residual(f.w(), f.w_kind(), std::move(res), up.b);
  auto [u, w, kind] = std::move(f).release();
  (void)kind;
  detail::apply_u_update(u, qty);
  detail::apply_w_update(w, qty, up.b);
  const double distance = subspace_distance_from_quantities(qty);
  return UpdateOutcome{
      UpdateKind::Generic,
      Factorization::adopt(OrthonormalFactor::adopt(std::move(u)), std::move(w),
                           MatrixStructure::General),
      distance, std::move(qty)};
}

Matrix projector_update(const Factorization& f, const RankOneUpdate& up,
                        const UpdateOptions& opts) {
  const UpdateQuantities qty = compute_quantities(f, up, opts);
  const std::size_t n = f.n();
  const std::size_t p = f.p();

  Matrix basis(n, p + 1);
  for (std::size_t j = 0; j < p; ++j) {
    const auto src = f.u().mat().col(j);
    std::copy(src.begin(), src.end(), basis.col(j).begin());
  }
  std::copy(qty.q.begin(), qty.q.end(), basis.col(p).begin());

  Vector g(p + 1);
  for (std::size_t j = 0; j < p; ++j) g[j] = qty.w_tilde[j];
  g[p] = qty.omega;
  const Vector basis_g = linalg::gemv(basis, g);

  Matrix proj = linalg::matmul(basis, linalg::transpose(basis));
  linalg::ger(proj, -1.0 / (qty.g_norm * qty.g_norm), basis_g, basis_g);
  return proj;
}

double subspace_distance_from_quantities(const UpdateQuantities& qty) {
  // Equals arccos(|omega| / ||g||); the two-argument form stays accurate near 0.
  return std::atan2(qty.w_tilde_norm, std::abs(qty.omega));
}

}  // namespace grood
