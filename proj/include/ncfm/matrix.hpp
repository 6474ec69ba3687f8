#pragma once

#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "ncfm/field.hpp"

namespace ncfm {

// Dense row-major matrix over one scalar field K. Zero-dimensional matrices
// are legal and behave as the unique empty matrix of their shape.
template <typename K>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, field_traits<K>::zero()) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
  }
  Matrix(int rows, int cols, std::initializer_list<K> entries) : Matrix(rows, cols) {
    if (static_cast<int>(entries.size()) != rows * cols)
      throw std::invalid_argument("Matrix: initializer size mismatch");
    std::copy(entries.begin(), entries.end(), a_.begin());
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = field_traits<K>::one();
    return m;
  }
  static Matrix zeros(int rows, int cols) { return Matrix(rows, cols); }
  // E_ij = e_i e_j^T of the given shape.
  static Matrix unit(int rows, int cols, int i, int j) {
    Matrix m(rows, cols);
    m(i, j) = field_traits<K>::one();
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  K& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const K& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  Matrix operator+(const Matrix& o) const {
    check_same_shape(o, "+");
    Matrix r(rows_, cols_);
    for (size_t t = 0; t < a_.size(); ++t) r.a_[t] = a_[t] + o.a_[t];
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    check_same_shape(o, "-");
    Matrix r(rows_, cols_);
    for (size_t t = 0; t < a_.size(); ++t) r.a_[t] = a_[t] - o.a_[t];
    return r;
  }
  Matrix operator-() const {
    Matrix r(rows_, cols_);
    for (size_t t = 0; t < a_.size(); ++t) r.a_[t] = -a_[t];
    return r;
  }
  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("Matrix*: inner dimension mismatch");
    Matrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const K& aik = (*this)(i, k);
        if (field_traits<K>::is_zero(aik)) continue;
        for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
      }
    return r;
  }
  Matrix operator*(const K& c) const {
    Matrix r(rows_, cols_);
    for (size_t t = 0; t < a_.size(); ++t) r.a_[t] = a_[t] * c;
    return r;
  }
  friend Matrix operator*(const K& c, const Matrix& m) { return m * c; }
  Matrix& operator+=(const Matrix& o) { return *this = *this + o; }
  Matrix& operator-=(const Matrix& o) { return *this = *this - o; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const K& x : a_)
      if (!field_traits<K>::is_zero(x)) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
  // Conjugate transpose; equals transpose() for real scalar fields.
  Matrix conj_transpose() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = field_traits<K>::conj((*this)(i, j));
    return r;
  }

  Matrix block(int i0, int j0, int r, int c) const {
    if (i0 < 0 || j0 < 0 || i0 + r > rows_ || j0 + c > cols_)
      throw std::out_of_range("Matrix::block out of range");
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = (*this)(i0 + i, j0 + j);
    return m;
  }
  void set_block(int i0, int j0, const Matrix& m) {
    if (i0 < 0 || j0 < 0 || i0 + m.rows_ > rows_ || j0 + m.cols_ > cols_)
      throw std::out_of_range("Matrix::set_block out of range");
    for (int i = 0; i < m.rows_; ++i)
      for (int j = 0; j < m.cols_; ++j) (*this)(i0 + i, j0 + j) = m(i, j);
  }
  Matrix col(int j) const { return block(0, j, rows_, 1); }
  Matrix row(int i) const { return block(i, 0, 1, cols_); }

  double max_abs_score() const {
    double best = 0.0;
    for (const K& x : a_) best = std::max(best, field_traits<K>::abs_score(x));
    return best;
  }

 private:
  void check_same_shape(const Matrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument(std::string("Matrix") + op + ": shape mismatch");
  }
  int rows_, cols_;
  std::vector<K> a_;
};

template <typename K>
Matrix<K> hstack(const Matrix<K>& a, const Matrix<K>& b) {
  if (a.rows() != b.rows() && !a.empty() && !b.empty())
    throw std::invalid_argument("hstack: row mismatch");
  int rows = a.empty() ? b.rows() : a.rows();
  Matrix<K> r(rows, a.cols() + b.cols());
  if (!a.empty()) r.set_block(0, 0, a);
  if (!b.empty()) r.set_block(0, a.cols(), b);
  return r;
}

template <typename K>
Matrix<K> vstack(const Matrix<K>& a, const Matrix<K>& b) {
  if (a.cols() != b.cols() && !a.empty() && !b.empty())
    throw std::invalid_argument("vstack: column mismatch");
  int cols = a.empty() ? b.cols() : a.cols();
  Matrix<K> r(a.rows() + b.rows(), cols);
  if (!a.empty()) r.set_block(0, 0, a);
  if (!b.empty()) r.set_block(a.rows(), 0, b);
  return r;
}

// Standard Kronecker product block layout [p_ij * Q].
template <typename K>
Matrix<K> kron(const Matrix<K>& p, const Matrix<K>& q) {
  Matrix<K> r(p.rows() * q.rows(), p.cols() * q.cols());
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) {
      if (field_traits<K>::is_zero(p(i, j))) continue;
      for (int a = 0; a < q.rows(); ++a)
        for (int b = 0; b < q.cols(); ++b)
          r(i * q.rows() + a, j * q.cols() + b) = p(i, j) * q(a, b);
    }
  return r;
}

template <typename K>
Matrix<K> direct_sum(const Matrix<K>& a, const Matrix<K>& b) {
  Matrix<K> r(a.rows() + b.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), a.cols(), b);
  return r;
}

// Entrywise conversion between scalar fields (e.g. exact -> float).
template <typename KTo, typename KFrom, typename Fn>
Matrix<KTo> map_entries(const Matrix<KFrom>& m, Fn fn) {
  Matrix<KTo> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = fn(m(i, j));
  return r;
}

inline Matrix<double> to_float(const Matrix<Rational>& m) {
  return map_entries<double>(m, [](const Rational& q) { return q.get_d(); });
}

template <typename K>
Matrix<K> from_rational_matrix(const Matrix<Rational>& m) {
  return map_entries<K>(m, [](const Rational& q) { return field_traits<K>::from_rational(q); });
}

}  // namespace ncfm
