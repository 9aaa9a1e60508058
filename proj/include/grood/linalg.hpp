#pragma once

// Dense column-major vectors and matrices plus the BLAS-1/2 style kernels the
// rank-one update needs. The kernels are templates over the scalar type so the
// same code path can run on an instrumented scalar for operation counting; see
// bench.hpp. Everything else in the library uses the double aliases.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "grood/error.hpp"

namespace grood::linalg {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// acc + x*y. The instrumented scalar overloads this to count a single FLOP.
inline double muladd(double acc, double x, double y) { return acc + x * y; }

inline double to_double(double x) { return x; }

template <class T>
class BasicVector {
public:
  BasicVector() = default;
  explicit BasicVector(std::size_t n, T value = T(0)) : data_(n, value) {}
  BasicVector(std::initializer_list<T> init) : data_(init) {}
  explicit BasicVector(std::vector<T> data) : data_(std::move(data)) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }
  std::span<T> span() noexcept { return data_; }
  std::span<const T> span() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  bool operator==(const BasicVector&) const = default;

private:
  std::vector<T> data_;
};

/// Column-major dense matrix. Column j occupies data()[j*rows(), (j+1)*rows()).
template <class T>
class BasicMatrix {
public:
  BasicMatrix() = default;
  BasicMatrix(std::size_t rows, std::size_t cols, T value = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  /// Row-major nested initializer, convenient for small literals in tests.
  BasicMatrix(std::initializer_list<std::initializer_list<T>> rows_init)
      : rows_(rows_init.size()),
        cols_(rows_init.size() ? rows_init.begin()->size() : 0),
        data_(rows_ * cols_) {
    std::size_t i = 0;
    for (const auto& row : rows_init) {
      require_dims(row.size() == cols_, "ragged matrix initializer");
      std::size_t j = 0;
      for (const T& v : row) (*this)(i, j++) = v;
      ++i;
    }
  }

  static BasicMatrix identity(std::size_t rows, std::size_t cols) {
    BasicMatrix m(rows, cols);
    for (std::size_t k = 0; k < std::min(rows, cols); ++k) m(k, k) = T(1);
    return m;
  }
  static BasicMatrix identity(std::size_t n) { return identity(n, n); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i + j * rows_]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i + j * rows_];
  }

  std::span<T> col(std::size_t j) {
    return std::span<T>(data_).subspan(j * rows_, rows_);
  }
  std::span<const T> col(std::size_t j) const {
    return std::span<const T>(data_).subspan(j * rows_, rows_);
  }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }
  std::span<T> span() noexcept { return data_; }
  std::span<const T> span() const noexcept { return data_; }

  bool operator==(const BasicMatrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Vector = BasicVector<double>;
using Matrix = BasicMatrix<double>;

/// Structural hint for W in X = UW, used to pick the cheapest transposed solve.
enum class MatrixStructure {
  General,
  UpperTriangular,          // QR provenance, W = R
  DiagonalTimesOrthogonal,  // SVD provenance, W = Sigma V^T
};

// ---------------------------------------------------------------------------
// Level 1

template <class T>
T dot(std::span<const T> x, std::span<const T> y) {
  require_dims(x.size() == y.size(), "dot: length mismatch");
  T acc(0);
  for (std::size_t i = 0; i < x.size(); ++i) acc = muladd(acc, x[i], y[i]);
  return acc;
}

template <class T>
T dot(const BasicVector<T>& x, const BasicVector<T>& y) {
  return dot(x.span(), y.span());
}

template <class T>
T nrm2(std::span<const T> x) {
  using std::sqrt;
  return sqrt(dot(x, x));
}

template <class T>
T nrm2(const BasicVector<T>& x) {
  return nrm2(x.span());
}

// y += alpha * x
template <class T>
void axpy(T alpha, std::span<const T> x, std::span<T> y) {
  require_dims(x.size() == y.size(), "axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = muladd(y[i], alpha, x[i]);
}

template <class T>
void scal(T alpha, std::span<T> x) {
  for (auto& v : x) v = v * alpha;
}

// Non-template double overloads so mutable spans convert implicitly.
inline double dot(std::span<const double> x, std::span<const double> y) {
  return dot<double>(x, y);
}
inline double nrm2(std::span<const double> x) { return nrm2<double>(x); }
inline void axpy(double alpha, std::span<const double> x,
                 std::span<double> y) {
  axpy<double>(alpha, x, y);
}

// ---------------------------------------------------------------------------
// Level 2

/// A * x
template <class T>
BasicVector<T> gemv(const BasicMatrix<T>& a, const BasicVector<T>& x) {
  require_dims(a.cols() == x.size(), "gemv: A.cols != x.len");
  BasicVector<T> y(a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) axpy(x[j], a.col(j), y.span());
  return y;
}

/// A^T * x
template <class T>
BasicVector<T> gemv_t(const BasicMatrix<T>& a, const BasicVector<T>& x) {
  require_dims(a.rows() == x.size(), "gemv_t: A.rows != x.len");
  BasicVector<T> y(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) y[j] = dot(a.col(j), x.span());
  return y;
}

/// In-place A += scale * x * y^T (DGER).
template <class T>
void ger(BasicMatrix<T>& a, T scale, const BasicVector<T>& x,
         const BasicVector<T>& y) {
  require_dims(x.size() == a.rows() && y.size() == a.cols(),
               "rank-one update: dimension mismatch");
  for (std::size_t j = 0; j < a.cols(); ++j) {
    axpy(scale * y[j], x.span(), a.col(j));
  }
}

/// Returns A + scale * x * y^T.
template <class T>
BasicMatrix<T> rank_one_accumulate(BasicMatrix<T> a, const BasicVector<T>& x,
                                   const BasicVector<T>& y, T scale) {
  ger(a, scale, x, y);
  return a;
}

enum class Reorthogonalization {
  Never,     // single classical Gram-Schmidt pass
  Adaptive,  // second pass only when cancellation occurred
  Always,    // unconditional second pass
};

template <class T>
struct ResidualResult {
  BasicVector<T> q_tilde;  // (I - U U^T) a
  T norm;                  // ||q_tilde||
  BasicVector<T> coeffs;   // U^T a, accumulated over both passes
  T a_norm;                // ||a||
  bool reorthogonalized = false;
};

/// Classical Gram-Schmidt residual of a against the columns of U, with a
/// second pass selected by `policy`. The adaptive test is the Kahan-Parlett
/// criterion ||q_tilde|| <= ||a|| / sqrt(2).
template <class T>
ResidualResult<T> orthogonal_residual(
    const BasicMatrix<T>& u, const BasicVector<T>& a,
    Reorthogonalization policy = Reorthogonalization::Adaptive) {
  require_dims(a.size() == u.rows(), "orthogonal_residual: a.len != U.rows");
  using std::sqrt;

  ResidualResult<T> r{a, T(0), gemv_t(u, a), nrm2(a)};
  for (std::size_t j = 0; j < u.cols(); ++j) {
    axpy(-r.coeffs[j], u.col(j), r.q_tilde.span());
  }
  r.norm = nrm2(r.q_tilde);

  const bool second =
      policy == Reorthogonalization::Always ||
      (policy == Reorthogonalization::Adaptive &&
       to_double(r.norm) <= to_double(r.a_norm) * 0.70710678118654752);
  if (second && u.cols() > 0) {
    const BasicVector<T> c = gemv_t(u, r.q_tilde);
    for (std::size_t j = 0; j < u.cols(); ++j) {
      axpy(-c[j], u.col(j), r.q_tilde.span());
      r.coeffs[j] = r.coeffs[j] + c[j];
    }
    r.norm = nrm2(r.q_tilde);
    r.reorthogonalized = true;
  }
  return r;
}

template <class T>
double max_abs(const BasicMatrix<T>& a) {
  double m = 0.0;
  for (const T& v : a.span()) m = std::max(m, std::abs(to_double(v)));
  return m;
}

/// Solves W^T x = -b. Pivots below p * eps * max|W_ij| raise SingularW.
template <class T>
BasicVector<T> solve_transposed(
    const BasicMatrix<T>& w, const BasicVector<T>& b,
    MatrixStructure structure = MatrixStructure::General) {
  require_dims(w.rows() == w.cols(), "solve_transposed: W not square");
  require_dims(b.size() == w.rows(), "solve_transposed: b.len != W.rows");
  const std::size_t p = w.rows();
  const double wmax = max_abs(w);
  const double pivot_tol = static_cast<double>(p) * kEps * wmax;
  auto singular = [&](const T& pivot) {
    return wmax == 0.0 || std::abs(to_double(pivot)) < pivot_tol;
  };
  auto fail = [] {
    throw_error(ErrorKind::SingularW, "W is numerically singular");
  };

  BasicVector<T> x(p);
  switch (structure) {
    case MatrixStructure::UpperTriangular: {
      // W^T is lower triangular: forward substitution.
      for (std::size_t i = 0; i < p; ++i) {
        if (singular(w(i, i))) fail();
        T acc = -b[i];
        for (std::size_t k = 0; k < i; ++k) acc = muladd(acc, -w(k, i), x[k]);
        x[i] = acc / w(i, i);
      }
      return x;
    }
    case MatrixStructure::DiagonalTimesOrthogonal: {
      // W = S V^T with row norms S: W^{-T} b = S^{-2} W b.
      const BasicVector<T> wb = gemv(w, b);
      for (std::size_t i = 0; i < p; ++i) {
        T s2(0);
        for (std::size_t k = 0; k < p; ++k) s2 = muladd(s2, w(i, k), w(i, k));
        using std::sqrt;
        if (singular(sqrt(s2))) fail();
        x[i] = -wb[i] / s2;
      }
      return x;
    }
    case MatrixStructure::General:
      break;
  }

  // LU with partial pivoting on A = W^T.
  BasicMatrix<T> lu(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) lu(i, j) = w(j, i);
  for (std::size_t i = 0; i < p; ++i) x[i] = -b[i];

  for (std::size_t k = 0; k < p; ++k) {
    std::size_t piv = k;
    double best = std::abs(to_double(lu(k, k)));
    for (std::size_t i = k + 1; i < p; ++i) {
      const double v = std::abs(to_double(lu(i, k)));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (singular(lu(piv, k))) fail();
    if (piv != k) {
      for (std::size_t j = 0; j < p; ++j) std::swap(lu(k, j), lu(piv, j));
      std::swap(x[k], x[piv]);
    }
    for (std::size_t i = k + 1; i < p; ++i) {
      const T m = lu(i, k) / lu(k, k);
      lu(i, k) = m;
      for (std::size_t j = k + 1; j < p; ++j) lu(i, j) = muladd(lu(i, j), -m, lu(k, j));
      x[i] = muladd(x[i], -m, x[k]);
    }
  }
  for (std::size_t k = p; k-- > 0;) {
    T acc = x[k];
    for (std::size_t j = k + 1; j < p; ++j) acc = muladd(acc, -lu(k, j), x[j]);
    x[k] = acc / lu(k, k);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Level 3 and small dense helpers (double only)

Matrix transpose(const Matrix& a);
Matrix matmul(const Matrix& a, const Matrix& b);
/// A^T * B
Matrix matmul_tn(const Matrix& a, const Matrix& b);
Matrix add(const Matrix& a, const Matrix& b, double scale_b = 1.0);
double frobenius_norm(const Matrix& a);
double frobenius_distance(const Matrix& a, const Matrix& b);
/// ||A^T A - I||_F
double orthonormality_error(const Matrix& a);
bool all_finite(std::span<const double> values);

struct SvdResult {
  Matrix u_factor;        // m x k, orthonormal columns
  Vector singular_values; // k, nonincreasing
  Matrix v_factor;        // n x k, orthonormal columns (k x k when m >= n)
};

/// One-sided Jacobi SVD for verification-scale matrices, k = min(m, n) <= 64.
SvdResult small_svd(const Matrix& a);

inline constexpr std::size_t kSmallSvdMaxDim = 64;

struct QrResult {
  Matrix q;  // m x n, orthonormal columns
  Matrix r;  // n x n upper triangular
};

/// Thin Householder QR of an m x n matrix with m >= n. Signs are chosen so
/// that diag(R) >= 0.
QrResult householder_qr(const Matrix& a);

}  // namespace grood::linalg
