#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <utility>
#include <vector>

#include "ftile/errors.hpp"
#include "ftile/integer.hpp"

namespace ftile {

/// Coordinate vector of a ring element (or of a lattice point).
template <class T> class Vector {
public:
  Vector() = default;
  explicit Vector(std::size_t n) : v_(n, T(0)) {}
  Vector(std::initializer_list<T> init) : v_(init) {}
  explicit Vector(std::vector<T> v) : v_(std::move(v)) {}

  std::size_t size() const noexcept { return v_.size(); }
  T &operator[](std::size_t i) { return v_[i]; }
  const T &operator[](std::size_t i) const { return v_[i]; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }
  const std::vector<T> &entries() const noexcept { return v_; }

  bool is_zero() const {
    return std::all_of(v_.begin(), v_.end(), [](const T &x) { return x == T(0); });
  }

  friend bool operator==(const Vector &, const Vector &) = default;

  friend Vector operator+(const Vector &a, const Vector &b) {
    check_same(a, b);
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.v_[i] = a.v_[i] + b.v_[i];
    return r;
  }
  friend Vector operator-(const Vector &a, const Vector &b) {
    check_same(a, b);
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.v_[i] = a.v_[i] - b.v_[i];
    return r;
  }
  friend Vector operator*(const T &c, const Vector &a) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.v_[i] = c * a.v_[i];
    return r;
  }
  Vector operator-() const {
    Vector r(size());
    for (std::size_t i = 0; i < size(); ++i) r.v_[i] = -v_[i];
    return r;
  }

private:
  static void check_same(const Vector &a, const Vector &b) {
    if (a.size() != b.size())
      throw Error(ErrorKind::DimensionError, "vector lengths differ");
  }

  std::vector<T> v_;
};

/// Square matrix, row-major.
template <class T> class Matrix {
public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>> &rows) {
    Matrix m(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows.size())
        throw Error(ErrorKind::DimensionError, "matrix is not square");
      for (std::size_t c = 0; c < rows.size(); ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  std::size_t dim() const noexcept { return n_; }
  T &operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  const T &operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }
  const std::vector<T> &entries() const noexcept { return a_; }

  bool is_identity() const { return *this == identity(n_); }

  friend bool operator==(const Matrix &, const Matrix &) = default;

  friend Matrix operator*(const Matrix &x, const Matrix &y) {
    check_same(x.n_, y.n_);
    const std::size_t n = x.n_;
    Matrix r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const T &xik = x(i, k);
        if (xik == T(0)) continue;
        for (std::size_t j = 0; j < n; ++j) r(i, j) += xik * y(k, j);
      }
    return r;
  }

  friend Vector<T> operator*(const Matrix &x, const Vector<T> &v) {
    check_same(x.n_, v.size());
    Vector<T> r(x.n_);
    for (std::size_t i = 0; i < x.n_; ++i) {
      T acc(0);
      for (std::size_t k = 0; k < x.n_; ++k) acc += x(i, k) * v[k];
      r[i] = acc;
    }
    return r;
  }

  friend Matrix operator+(const Matrix &x, const Matrix &y) {
    check_same(x.n_, y.n_);
    Matrix r(x.n_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = x.a_[i] + y.a_[i];
    return r;
  }

  friend Matrix operator-(const Matrix &x, const Matrix &y) {
    check_same(x.n_, y.n_);
    Matrix r(x.n_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = x.a_[i] - y.a_[i];
    return r;
  }

  friend Matrix operator*(const T &c, const Matrix &x) {
    Matrix r(x.n_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = c * x.a_[i];
    return r;
  }

  Matrix operator-() const { return T(-1) * *this; }

private:
  static void check_same(std::size_t a, std::size_t b) {
    if (a != b) throw Error(ErrorKind::DimensionError, "matrix dimensions differ");
  }

  std::size_t n_ = 0;
  std::vector<T> a_;
};

template <class T> Matrix<T> power(const Matrix<T> &m, unsigned exponent) {
  Matrix<T> result = Matrix<T>::identity(m.dim());
  Matrix<T> base = m;
  while (exponent) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1u;
    if (exponent) base = base * base;
  }
  return result;
}

template <class To, class From> Matrix<To> convert(const Matrix<From> &m) {
  Matrix<To> r(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) r(i, j) = from_bigint<To>(to_bigint(m(i, j)));
  return r;
}

template <class To, class From> Vector<To> convert(const Vector<From> &v) {
  Vector<To> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = from_bigint<To>(to_bigint(v[i]));
  return r;
}

using IntVector = Vector<BigInt>;
using IntMatrix = Matrix<BigInt>;

template <class T> std::ostream &operator<<(std::ostream &os, const Vector<T> &v) {
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << to_bigint(v[i]);
  return os << ')';
}

template <class T> std::ostream &operator<<(std::ostream &os, const Matrix<T> &m) {
  os << '[';
  for (std::size_t i = 0; i < m.dim(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.dim(); ++j) os << (j ? "," : "") << to_bigint(m(i, j));
    os << ']';
  }
  return os << ']';
}

} // namespace ftile
