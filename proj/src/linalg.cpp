#include "grood/linalg.hpp"

#include <numeric>
#include <string>

namespace grood::linalg {

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require_dims(a.cols() == b.rows(), "matmul: inner dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj == 0.0) continue;
      axpy(bkj, a.col(k), c.col(j));
    }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  require_dims(a.rows() == b.rows(), "matmul_tn: row mismatch");
  Matrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = dot(a.col(i), b.col(j));
  return c;
}

Matrix add(const Matrix& a, const Matrix& b, double scale_b) {
  require_dims(a.rows() == b.rows() && a.cols() == b.cols(),
               "add: shape mismatch");
  Matrix c = a;
  axpy(scale_b, b.span(), c.span());
  return c;
}

double frobenius_norm(const Matrix& a) { return nrm2(a.span()); }

double frobenius_distance(const Matrix& a, const Matrix& b) {
  return frobenius_norm(add(a, b, -1.0));
}

double orthonormality_error(const Matrix& a) {
  Matrix g = matmul_tn(a, a);
  for (std::size_t k = 0; k < g.rows(); ++k) g(k, k) -= 1.0;
  return frobenius_norm(g);
}

bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

namespace {

// Fills the columns of u flagged in `missing` with unit vectors orthogonal to
// every other column.
void complete_orthonormal(Matrix& u, const std::vector<bool>& missing) {
  const std::size_t m = u.rows();
  std::vector<bool> done(u.cols());
  for (std::size_t j = 0; j < u.cols(); ++j) done[j] = !missing[j];

  std::size_t probe = 0;
  for (std::size_t j = 0; j < u.cols(); ++j) {
    if (!missing[j]) continue;
    for (; probe < m; ++probe) {
      Vector v(m);
      v[probe] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = 0; k < u.cols(); ++k) {
          if (!done[k]) continue;
          axpy(-dot(u.col(k), v.span()), u.col(k), v.span());
        }
      const double nv = nrm2(v);
      if (nv > 0.5) {
        scal(1.0 / nv, v.span());
        std::copy(v.begin(), v.end(), u.col(j).begin());
        done[j] = true;
        ++probe;
        break;
      }
    }
  }
}

SvdResult jacobi_tall(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Matrix g = a;
  Matrix v = Matrix::identity(n);
  const double tol = kEps * static_cast<double>(m);

  constexpr int kMaxSweeps = 30;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double alpha = dot(g.col(i), g.col(i));
        const double beta = dot(g.col(j), g.col(j));
        const double gamma = dot(g.col(i), g.col(j));
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        converged = false;

        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        auto rotate = [c, s](std::span<double> x, std::span<double> y) {
          for (std::size_t k = 0; k < x.size(); ++k) {
            const double xk = x[k];
            const double yk = y[k];
            x[k] = c * xk - s * yk;
            y[k] = s * xk + c * yk;
          }
        };
        rotate(g.col(i), g.col(j));
        rotate(v.col(i), v.col(j));
      }
    }
  }
  if (!converged) {
    throw_error(ErrorKind::NoConvergence,
                "small_svd: Jacobi iteration did not converge in 30 sweeps");
  }

  Vector sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = nrm2(g.col(j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SvdResult out{Matrix(m, n), Vector(n), Matrix(n, n)};
  const double smax = n ? sigma[order[0]] : 0.0;
  std::vector<bool> missing(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.singular_values[k] = sigma[j];
    std::copy(v.col(j).begin(), v.col(j).end(), out.v_factor.col(k).begin());
    if (sigma[j] == 0.0 || sigma[j] <= smax * kEps * kEps) {
      missing[k] = true;
      continue;
    }
    auto src = g.col(j);
    auto dst = out.u_factor.col(k);
    for (std::size_t i = 0; i < m; ++i) dst[i] = src[i] / sigma[j];
  }
  if (std::find(missing.begin(), missing.end(), true) != missing.end()) {
    complete_orthonormal(out.u_factor, missing);
  }
  return out;
}

}  // namespace

SvdResult small_svd(const Matrix& a) {
  if (std::min(a.rows(), a.cols()) > kSmallSvdMaxDim) {
    throw_error(ErrorKind::InvalidArgument,
                "small_svd: min(rows, cols) exceeds " +
                    std::to_string(kSmallSvdMaxDim));
  }
  require_dims(a.rows() > 0 && a.cols() > 0, "small_svd: empty matrix");
  if (a.rows() >= a.cols()) return jacobi_tall(a);
  SvdResult t = jacobi_tall(transpose(a));
  return SvdResult{std::move(t.v_factor), std::move(t.singular_values),
                   std::move(t.u_factor)};
}

QrResult householder_qr(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  require_dims(m >= n, "householder_qr: needs rows >= cols");
  Matrix r = a;
  std::vector<Vector> reflectors;
  reflectors.reserve(n);

  for (std::size_t k = 0; k < n; ++k) {
    Vector v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = r(i, k);
    const double xnorm = nrm2(v);
    if (xnorm == 0.0) {
      reflectors.emplace_back(m - k);
      continue;
    }
    const double alpha = v[0] >= 0.0 ? -xnorm : xnorm;
    v[0] -= alpha;
    const double vnorm = nrm2(v);
    scal(1.0 / vnorm, v.span());
    for (std::size_t j = k; j < n; ++j) {
      auto cj = r.col(j).subspan(k);
      const double d = 2.0 * dot(std::span<const double>(v.span()),
                                 std::span<const double>(cj));
      axpy(-d, std::span<const double>(v.span()), cj);
    }
    for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0.0;
    r(k, k) = alpha;
    reflectors.push_back(std::move(v));
  }

  Matrix q = Matrix::identity(m, n);
  for (std::size_t k = n; k-- > 0;) {
    const Vector& v = reflectors[k];
    for (std::size_t j = 0; j < n; ++j) {
      auto cj = q.col(j).subspan(k);
      const double d = 2.0 * dot(std::span<const double>(v.span()),
                                 std::span<const double>(cj));
      if (d != 0.0) axpy(-d, std::span<const double>(v.span()), cj);
    }
  }

  QrResult out{std::move(q), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const double sign = r(k, k) < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = k; j < n; ++j) out.r(k, j) = sign * r(k, j);
    if (sign < 0.0) scal(-1.0, out.q.col(k));
  }
  return out;
}

}  // namespace grood::linalg
