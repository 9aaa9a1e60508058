#pragma once

// Scalar-generic implementation of the geodesic rank-one update. The public
// entry points in core.hpp instantiate it with double; bench.hpp instantiates
// it with an operation-counting scalar.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "grood/error.hpp"
#include "grood/linalg.hpp"

namespace grood::detail {

using linalg::BasicMatrix;
using linalg::BasicVector;
using linalg::MatrixStructure;
using linalg::Reorthogonalization;

template <class T>
struct BasicQuantities {
  BasicVector<T> q_tilde;  // (I - U U^T) a
  T q_tilde_norm{};
  BasicVector<T> q;        // q_tilde / ||q_tilde||
  BasicVector<T> w_tilde;  // -W^{-T} b
  T w_tilde_norm{};
  BasicVector<T> w_unit;   // w_tilde / ||w_tilde||
  T omega{};
  T g_norm{};              // ||(w_tilde, omega)||
  T alpha{};               // cos(t*) - 1
  T beta{};                // sin(t*)
  T gamma{};               // W-update coefficient
  double t_star = 0.0;     // radians
  BasicVector<T> u_t_a;    // U^T a
  T a_norm{};
};

inline double deflation_threshold(double tol, double a_norm) {
  return tol * std::max(1.0, a_norm);
}

template <class T>
bool is_zero(const BasicVector<T>& v) {
  using linalg::to_double;
  for (const T& x : v) {
    if (to_double(x) != 0.0) return false;
  }
  return true;
}

/// Scalars and directions of the geodesic update for X + a b^T, X = U W,
/// given the Gram-Schmidt residual of a against U. Throws ZeroB or SingularW.
template <class T>
BasicQuantities<T> quantities_from_residual(const BasicMatrix<T>& w,
                                            MatrixStructure w_kind,
                                            linalg::ResidualResult<T> res,
                                            const BasicVector<T>& b) {
  using linalg::to_double;
  using std::abs;
  using std::sqrt;
  require_dims(w.rows() == res.coeffs.size() && w.cols() == res.coeffs.size(),
               "update: W must be p x p");
  require_dims(b.size() == w.cols(), "update: b.len != p");
  if (is_zero(b)) throw_error(ErrorKind::ZeroB, "update: b = 0");

  BasicQuantities<T> qty;
  qty.q_tilde_norm = res.norm;
  qty.a_norm = res.a_norm;
  qty.u_t_a = std::move(res.coeffs);
  qty.q = res.q_tilde;
  linalg::scal(T(1) / qty.q_tilde_norm, qty.q.span());
  qty.q_tilde = std::move(res.q_tilde);

  qty.w_tilde = linalg::solve_transposed(w, b, w_kind);
  qty.w_tilde_norm = linalg::nrm2(qty.w_tilde);
  if (to_double(qty.w_tilde_norm) == 0.0) {
    throw_error(ErrorKind::ZeroB, "update: W^{-T} b underflows to zero");
  }
  qty.w_unit = qty.w_tilde;
  linalg::scal(T(1) / qty.w_tilde_norm, qty.w_unit.span());

  qty.omega = (T(1) - linalg::dot(qty.u_t_a, qty.w_tilde)) / qty.q_tilde_norm;
  qty.g_norm = sqrt(qty.w_tilde_norm * qty.w_tilde_norm + qty.omega * qty.omega);

  const T abs_omega = abs(qty.omega);
  // sign(0) := +1
  const T sign_omega = to_double(qty.omega) < 0.0 ? T(-1) : T(1);
  qty.alpha = abs_omega / qty.g_norm - T(1);
  qty.beta = -sign_omega * qty.w_tilde_norm / qty.g_norm;
  // q^T a = ||q_tilde|| since q is orthogonal to ran(U).
  qty.gamma = qty.beta * qty.q_tilde_norm -
              qty.alpha * qty.q_tilde_norm * qty.omega / qty.w_tilde_norm;
  // arcsin(beta), evaluated as an angle in [-pi/2, pi/2] with cos = |omega|/||g||.
  qty.t_star = std::atan2(-to_double(sign_omega) * to_double(qty.w_tilde_norm),
                          to_double(abs_omega));
  return qty;
}

/// Full quantity computation including the range test. Throws ZeroB,
/// InRange or SingularW.
template <class T>
BasicQuantities<T> compute_quantities(const BasicMatrix<T>& u,
                                      const BasicMatrix<T>& w,
                                      MatrixStructure w_kind,
                                      const BasicVector<T>& a,
                                      const BasicVector<T>& b,
                                      double deflation_tol,
                                      Reorthogonalization policy) {
  require_dims(a.size() == u.rows(), "update: a.len != n");
  require_dims(b.size() == u.cols(), "update: b.len != p");
  if (is_zero(b)) throw_error(ErrorKind::ZeroB, "update: b = 0");
  using linalg::to_double;
  auto res = linalg::orthogonal_residual(u, a, policy);
  const double norm = to_double(res.norm);
  if (!(norm > deflation_threshold(deflation_tol, to_double(res.a_norm)))) {
    throw_error(ErrorKind::InRange,
                "update: a lies in ran(U) (||(I-UU^T)a|| = " +
                    std::to_string(norm) + ")");
  }
  return quantities_from_residual(w, w_kind, std::move(res), b);
}

/// U += (alpha U w + beta q) w^T.
template <class T>
void apply_u_update(BasicMatrix<T>& u, const BasicQuantities<T>& qty) {
  require_dims(qty.q.size() == u.rows() && qty.w_unit.size() == u.cols(),
               "update_u: quantities do not match U");
  BasicVector<T> x = qty.q;
  linalg::scal(qty.beta, x.span());
  for (std::size_t j = 0; j < u.cols(); ++j) {
    linalg::axpy(qty.alpha * qty.w_unit[j], std::as_const(u).col(j), x.span());
  }
  linalg::ger(u, T(1), x, qty.w_unit);
}

/// W += (U^T a + gamma w) b^T.
template <class T>
void apply_w_update(BasicMatrix<T>& w, const BasicQuantities<T>& qty,
                    const BasicVector<T>& b) {
  require_dims(w.rows() == qty.u_t_a.size() && w.cols() == b.size(),
               "update_w: quantities do not match W");
  BasicVector<T> v = qty.u_t_a;
  linalg::axpy(qty.gamma, qty.w_unit.span(), v.span());
  linalg::ger(w, T(1), v, b);
}

}  // namespace grood::detail
