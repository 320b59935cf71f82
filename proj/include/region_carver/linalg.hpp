#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace region_carver {

using RealVector = std::vector<double>;
using ComplexVector = std::vector<std::complex<double>>;

/// Dense row-major matrix for the small systems used throughout (n <= ~8).
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }
  std::span<T> row(std::size_t i) { return std::span<T>(data_).subspan(i * cols_, cols_); }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T aik = a(i, k);
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
double norm2(std::span<const T> v) {
  double s = 0.0;
  for (const T& x : v) s += std::norm(x);
  return std::sqrt(s);
}

template <class T>
double norm2(const std::vector<T>& v) {
  return norm2(std::span<const T>(v));
}

template <class T>
double distance(std::span<const T> a, std::span<const T> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

template <class T>
double distance(const std::vector<T>& a, const std::vector<T>& b) {
  return distance(std::span<const T>(a), std::span<const T>(b));
}

/// In-place LU factorization with partial pivoting; solves A x = b.
/// Returns false if a pivot is exactly zero.
template <class T>
bool lu_solve(Matrix<T> a, std::span<T> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("lu_solve shape mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (double v = std::abs(a(i, k)); v > best) {
        best = v;
        piv = i;
      }
    if (best == 0.0) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    const T inv = T{1} / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const T f = a(i, k) * inv;
      if (f == T{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    T s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * b[j];
    b[ii] = s / a(ii, ii);
  }
  return true;
}

/// Eigen-decomposition of a real symmetric matrix.
struct SymmetricEigen {
  RealVector values;       // ascending
  Matrix<double> vectors;  // column j is the unit eigenvector of values[j]
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm falls below
/// tol times the Frobenius norm of the input.
inline SymmetricEigen jacobi_eigen(Matrix<double> a, double tol = 1e-12, int max_sweeps = 100) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("jacobi_eigen needs a square matrix");
  Matrix<double> v = Matrix<double>::identity(n);
  double total = 0.0;
  for (double x : a.data()) total += x * x;
  total = std::sqrt(total);
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  int sweep = 0;
  while (sweep < max_sweeps && off_norm() > tol * total) {
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymmetricEigen out;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors = Matrix<double>(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

}  // namespace region_carver
