#include "grood/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace grood {

namespace {

struct Residual {
  linalg::ResidualResult<double> res;
  Vector q;
};

Residual out_of_range_residual(const Matrix& u, const RankOneUpdate& up,
                               const UpdateOptions& opts) {
  require_dims(up.a.size() == u.rows() && up.b.size() == u.cols(),
               "update: dimension mismatch");
  if (detail::is_zero(up.b)) throw_error(ErrorKind::ZeroB, "update: b = 0");
  auto res = linalg::orthogonal_residual(u, up.a, opts.reorth);
  if (!(res.norm > detail::deflation_threshold(opts.deflation_tol, res.a_norm))) {
    throw_error(ErrorKind::InRange, "update: a lies in ran(U)");
  }
  Vector q = res.q_tilde;
  linalg::scal(1.0 / res.norm, q.span());
  return {std::move(res), std::move(q)};
}

// (U, q) * M for M of shape (p+1) x k.
Matrix extend_basis(const Matrix& u, const Vector& q, const Matrix& m) {
  const std::size_t p = u.cols();
  Matrix top(p, m.cols());
  Vector last(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < p; ++i) top(i, j) = m(i, j);
    last[j] = m(p, j);
  }
  Matrix out = linalg::matmul(u, top);
  linalg::ger(out, 1.0, q, last);
  return out;
}

}  // namespace

const char* to_string(RangeClass kind) noexcept {
  switch (kind) {
    case RangeClass::OutOfRange: return "OutOfRange";
    case RangeClass::InRangeRegular: return "InRangeRegular";
    case RangeClass::InRangeDeflating: return "InRangeDeflating";
  }
  return "Unknown";
}

AugmentedFactor augmented_factor(const Factorization& f, const RankOneUpdate& up,
                                 const UpdateOptions& opts) {
  auto [res, q] = out_of_range_residual(f.u().mat(), up, opts);
  const std::size_t p = f.p();
  Matrix k(p + 1, p);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < p; ++i) k(i, j) = f.w()(i, j) + res.coeffs[i] * up.b[j];
    k(p, j) = res.norm * up.b[j];
  }
  return AugmentedFactor{std::move(k), std::move(q)};
}

BrandResult brand_update_factorization(const Factorization& f,
                                       const RankOneUpdate& up,
                                       const UpdateOptions& opts) {
  if (f.p() + 1 > linalg::kSmallSvdMaxDim) {
    throw_error(ErrorKind::InvalidArgument, "brand_update: p > 63");
  }
  const AugmentedFactor k = augmented_factor(f, up, opts);
  const auto svd = linalg::small_svd(k.mat);
  const std::size_t p = f.p();
  Matrix w(p, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < p; ++i)
      w(i, j) = svd.singular_values[i] * svd.v_factor(j, i);
  return BrandResult{
      OrthonormalFactor::adopt(extend_basis(f.u().mat(), k.q, svd.u_factor)),
      std::move(w)};
}

OrthonormalFactor brand_update(const Factorization& f, const RankOneUpdate& up,
                               const UpdateOptions& opts) {
  return brand_update_factorization(f, up, opts).u;
}

KaufmanResult kaufman_update(const Factorization& f, const RankOneUpdate& up,
                             const UpdateOptions& opts) {
  AugmentedFactor aug = augmented_factor(f, up, opts);
  Matrix& k = aug.mat;
  const std::size_t p = f.p();
  Matrix q_hat = Matrix::identity(p + 1);
  std::size_t rotations = 0;

  // Zeroes k(r2, j) by rotating rows r1 and r2.
  auto rotate = [&](std::size_t r1, std::size_t r2, std::size_t j) {
    const double a = k(r1, j);
    const double b = k(r2, j);
    if (b == 0.0) return;
    const double rho = std::hypot(a, b);
    const double c = a / rho;
    const double s = b / rho;
    for (std::size_t col = j; col < p; ++col) {
      const double x = k(r1, col);
      const double y = k(r2, col);
      k(r1, col) = c * x + s * y;
      k(r2, col) = -s * x + c * y;
    }
    k(r2, j) = 0.0;
    for (std::size_t row = 0; row <= p; ++row) {
      const double x = q_hat(row, r1);
      const double y = q_hat(row, r2);
      q_hat(row, r1) = c * x + s * y;
      q_hat(row, r2) = -s * x + c * y;
    }
    ++rotations;
  };

  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = p - 1; i > j; --i) rotate(i - 1, i, j);
  for (std::size_t j = 0; j < p; ++j) rotate(j, p, j);

  Matrix r(p, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i <= j; ++i) r(i, j) = k(i, j);
  Matrix basis(p + 1, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i <= p; ++i) basis(i, j) = q_hat(i, j);

  return KaufmanResult{
      OrthonormalFactor::adopt(extend_basis(f.u().mat(), aug.q, basis)),
      std::move(r), rotations};
}

OrthonormalFactor elementary_update(const OrthonormalFactor& u,
                                    const RankOneUpdate& up,
                                    const UpdateOptions& opts) {
  auto [res, q] = out_of_range_residual(u.mat(), up, opts);
  const double b_norm = linalg::nrm2(up.b);
  const double c = 1.0 + linalg::dot(res.coeffs, up.b);  // 1 + a^T U b
  const double g_norm = std::sqrt(c * c / (res.norm * res.norm) + b_norm * b_norm);

  Vector w = up.b;
  linalg::scal(1.0 / b_norm, w.span());
  Vector v = q;
  linalg::scal(b_norm / g_norm, v.span());
  const double u1_coeff = c / (res.norm * g_norm) - 1.0;
  for (std::size_t j = 0; j < u.cols(); ++j) {
    linalg::axpy(u1_coeff * w[j], u.mat().col(j), v.span());
  }
  Matrix out = u.mat();
  linalg::ger(out, 1.0, v, w);
  return OrthonormalFactor::adopt(std::move(out));
}

Factorization full_refactor(const Matrix& x) {
  require_dims(x.rows() >= x.cols() && x.cols() > 0,
               "full_refactor: X must be n x p with n >= p");
  auto qr = linalg::householder_qr(x);
  // Numerical-rank tolerance; rounding in the dropped R_kk grows with n and ||X||.
  const double tol = static_cast<double>(std::max(x.rows(), x.cols())) * linalg::kEps *
                     linalg::frobenius_norm(x);
  for (std::size_t k = 0; k < x.cols(); ++k) {
    if (!(std::abs(qr.r(k, k)) >= tol) || tol == 0.0) {
      throw_error(ErrorKind::RankDeficient,
                  "full_refactor: |R_kk| below threshold at k = " + std::to_string(k));
    }
  }
  return Factorization::adopt(OrthonormalFactor::adopt(std::move(qr.q)),
                              std::move(qr.r), MatrixStructure::UpperTriangular);
}

UpdateClassification wedderburn_classify(const Factorization& f,
                                         const RankOneUpdate& up, double tol) {
  require_dims(up.a.size() == f.n() && up.b.size() == f.p(),
               "wedderburn_classify: dimension mismatch");
  const auto res = linalg::orthogonal_residual(f.u().mat(), up.a,
                                               Reorthogonalization::Always);
  if (res.norm > tol * res.a_norm) {
    return UpdateClassification{RangeClass::OutOfRange, std::nullopt};
  }
  InRangeCheck check = check_in_range_update(f, res.coeffs, up.b, tol);
  return UpdateClassification{
      check.regular ? RangeClass::InRangeRegular : RangeClass::InRangeDeflating,
      std::move(check.coeffs)};
}

}  // namespace grood
