#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nloop/errors.hpp"
#include "nloop/rational.hpp"

namespace nloop {

// Scalar hooks for Rational; FieldElement, ModElement and Complex provide
// theirs next to their definitions (found by ADL).
inline bool is_zero(const Rational& a) { return a == 0; }
inline Rational inverse(const Rational& a) {
  if (a == 0) throw DivisionByZero("inverse of zero rational");
  return 1 / a;
}
inline int pivot_magnitude(const Rational& a) { return a == 0 ? 0 : 1; }
inline Rational zero_like(const Rational&) { return Rational(0); }
inline Rational one_like(const Rational&) { return Rational(1); }
inline Rational lift_rational(const Rational&, const Rational& q) { return q; }

/// Dense row-major matrix with fixed dimensions.
template <class T>
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n, const T& zero, const T& one) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_, data_.front());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  template <class F>
  auto map(F&& f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    Matrix<U> out(rows_, cols_, f(data_.front()));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = f((*this)(i, j));
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error("matrix product dimension mismatch");
    Matrix r(a.rows_, b.cols_, zero_like(a.data_.front()));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (is_zero(a(i, k))) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += a(i, k) * b(k, j);
      }
    return r;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<T> data_;
};

namespace detail {

// Row of the largest pivot_magnitude in column `col` at or below `from`;
// ties go to the first row, so exact types pick the first nonzero entry.
template <class T>
std::size_t choose_pivot(const Matrix<T>& a, std::size_t col, std::size_t from) {
  std::size_t best = from;
  auto best_mag = pivot_magnitude(a(from, col));
  for (std::size_t r = from + 1; r < a.rows(); ++r) {
    auto mag = pivot_magnitude(a(r, col));
    if (best_mag < mag) {
      best = r;
      best_mag = std::move(mag);
    }
  }
  return best;
}

template <class T>
void swap_rows(Matrix<T>& a, std::size_t r1, std::size_t r2) {
  if (r1 == r2) return;
  for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r1, j), a(r2, j));
}

}  // namespace detail

/// Determinant by Gaussian elimination.
template <class T>
T determinant(Matrix<T> a) {
  if (!a.is_square()) throw Error("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  T det = one_like(a(0, 0));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = detail::choose_pivot(a, c, c);
    if (is_zero(a(p, c))) return zero_like(det);
    if (p != c) {
      detail::swap_rows(a, p, c);
      det = -det;
    }
    det *= a(c, c);
    T inv = inverse(a(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      if (is_zero(a(r, c))) continue;
      T f = a(r, c) * inv;
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

/// Inverse by Gauss-Jordan elimination. Throws SingularMatrix.
template <class T>
Matrix<T> inverse(Matrix<T> a) {
  if (!a.is_square()) throw Error("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  const T zero = zero_like(a(0, 0));
  Matrix<T> inv = Matrix<T>::identity(n, zero, one_like(zero));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = detail::choose_pivot(a, c, c);
    if (is_zero(a(p, c))) throw SingularMatrix("matrix is singular (no pivot in column " + std::to_string(c) + ")");
    detail::swap_rows(a, p, c);
    detail::swap_rows(inv, p, c);
    T pinv = inverse(a(c, c));
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) *= pinv;
      inv(c, j) *= pinv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || is_zero(a(r, c))) continue;
      T f = a(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

/// Rank by row reduction.
template <class T>
std::size_t rank(Matrix<T> a) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = detail::choose_pivot(a, c, r);
    if (is_zero(a(p, c))) continue;
    detail::swap_rows(a, p, r);
    T pinv = inverse(a(r, c));
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (is_zero(a(i, c))) continue;
      T f = a(i, c) * pinv;
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

}  // namespace nloop
