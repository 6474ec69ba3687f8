#pragma once

#include <vector>

#include "ncfm/linalg.hpp"
#include "ncfm/words.hpp"

namespace ncfm {

// A linear map T : K^{s x s} -> K^{p x q}, stored by the images of the
// standard basis: images[i*s+j] = T(E_ij). The representation keeps the
// synthesis and Kalman formulas blockwise, exactly as they act on images.
template <typename K>
class BlockLinearMap {
 public:
  BlockLinearMap() : s_(0), p_(0), q_(0) {}
  BlockLinearMap(int s, int p, int q)
      : s_(s), p_(p), q_(q), images_(static_cast<size_t>(s) * s, Matrix<K>(p, q)) {}

  static BlockLinearMap zero(int s, int p, int q) { return BlockLinearMap(s, p, q); }
  // The identity map on K^{s x s}.
  static BlockLinearMap id(int s) {
    BlockLinearMap t(s, s, s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) t.image(i, j) = Matrix<K>::unit(s, s, i, j);
    return t;
  }
  // X |-> (I_{p/s} (x) X) * M for a constant M in K^{p x q} with s | p; the
  // form every synthesized map takes.
  static BlockLinearMap from_right_factor(int s, const Matrix<K>& m) {
    if (m.rows() % s != 0) throw std::invalid_argument("from_right_factor: s must divide rows");
    BlockLinearMap t(s, m.rows(), m.cols());
    int blocks = m.rows() / s;
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j)
        t.image(i, j) = kron(Matrix<K>::identity(blocks), Matrix<K>::unit(s, s, i, j)) * m;
    return t;
  }

  int input_size() const { return s_; }
  int out_rows() const { return p_; }
  int out_cols() const { return q_; }

  Matrix<K>& image(int i, int j) { return images_[static_cast<size_t>(i) * s_ + j]; }
  const Matrix<K>& image(int i, int j) const { return images_[static_cast<size_t>(i) * s_ + j]; }
  const Matrix<K>& image_flat(int cell) const { return images_[cell]; }
  Matrix<K>& image_flat(int cell) { return images_[cell]; }

  // T(X) = sum_ij x_ij T(E_ij).
  Matrix<K> apply(const Matrix<K>& x) const {
    if (x.rows() != s_ || x.cols() != s_) throw std::invalid_argument("apply: input must be s x s");
    Matrix<K> r(p_, q_);
    for (int i = 0; i < s_; ++i)
      for (int j = 0; j < s_; ++j) {
        const K& c = x(i, j);
        if (field_traits<K>::is_zero(c)) continue;
        r += image(i, j) * c;
      }
    return r;
  }

  // Blockwise extension (X)T = [T(X_ij)] for X of size sm x sm.
  Matrix<K> apply_blocks(const Matrix<K>& x) const {
    if (x.rows() != x.cols() || x.rows() % s_ != 0)
      throw std::invalid_argument("apply_blocks: size must be a square multiple of s");
    const int m = x.rows() / s_;
    Matrix<K> r(p_ * m, q_ * m);
    for (int bi = 0; bi < m; ++bi)
      for (int bj = 0; bj < m; ++bj)
        r.set_block(bi * p_, bj * q_, apply(x.block(bi * s_, bj * s_, s_, s_)));
    return r;
  }

  BlockLinearMap operator+(const BlockLinearMap& o) const {
    check_same_shape(o);
    BlockLinearMap r(s_, p_, q_);
    for (size_t t = 0; t < images_.size(); ++t) r.images_[t] = images_[t] + o.images_[t];
    return r;
  }
  BlockLinearMap operator-(const BlockLinearMap& o) const {
    check_same_shape(o);
    BlockLinearMap r(s_, p_, q_);
    for (size_t t = 0; t < images_.size(); ++t) r.images_[t] = images_[t] - o.images_[t];
    return r;
  }
  BlockLinearMap operator-() const {
    BlockLinearMap r(s_, p_, q_);
    for (size_t t = 0; t < images_.size(); ++t) r.images_[t] = -images_[t];
    return r;
  }
  BlockLinearMap scale(const K& c) const {
    BlockLinearMap r(s_, p_, q_);
    for (size_t t = 0; t < images_.size(); ++t) r.images_[t] = images_[t] * c;
    return r;
  }
  bool operator==(const BlockLinearMap& o) const {
    return s_ == o.s_ && p_ == o.p_ && q_ == o.q_ && images_ == o.images_;
  }
  bool operator!=(const BlockLinearMap& o) const { return !(*this == o); }
  bool is_zero() const {
    for (const auto& m : images_)
      if (!m.is_zero()) return false;
    return true;
  }

  void check_same_shape(const BlockLinearMap& o) const {
    if (s_ != o.s_ || p_ != o.p_ || q_ != o.q_)
      throw std::invalid_argument("BlockLinearMap: shape mismatch");
  }

 private:
  int s_, p_, q_;
  std::vector<Matrix<K>> images_;
};

// (C . T)(X) := C T(X).
template <typename K>
BlockLinearMap<K> compose_const_left(const Matrix<K>& c, const BlockLinearMap<K>& t) {
  if (c.cols() != t.out_rows()) throw std::invalid_argument("compose_const_left: shape mismatch");
  BlockLinearMap<K> r(t.input_size(), c.rows(), t.out_cols());
  for (int i = 0; i < t.input_size(); ++i)
    for (int j = 0; j < t.input_size(); ++j) r.image(i, j) = c * t.image(i, j);
  return r;
}

// (T . C)(X) := T(X) C.
template <typename K>
BlockLinearMap<K> compose_const_right(const BlockLinearMap<K>& t, const Matrix<K>& c) {
  if (t.out_cols() != c.rows()) throw std::invalid_argument("compose_const_right: shape mismatch");
  BlockLinearMap<K> r(t.input_size(), t.out_rows(), c.cols());
  for (int i = 0; i < t.input_size(); ++i)
    for (int j = 0; j < t.input_size(); ++j) r.image(i, j) = t.image(i, j) * c;
  return r;
}

// 2x2 block assemblies used by the synthesis combinators. Absent corners are
// zero maps.
template <typename K>
BlockLinearMap<K> block_diag(const BlockLinearMap<K>& a, const BlockLinearMap<K>& b) {
  BlockLinearMap<K> r(a.input_size(), a.out_rows() + b.out_rows(), a.out_cols() + b.out_cols());
  for (int i = 0; i < a.input_size(); ++i)
    for (int j = 0; j < a.input_size(); ++j) {
      Matrix<K> m(r.out_rows(), r.out_cols());
      m.set_block(0, 0, a.image(i, j));
      m.set_block(a.out_rows(), a.out_cols(), b.image(i, j));
      r.image(i, j) = m;
    }
  return r;
}

template <typename K>
BlockLinearMap<K> block_upper(const BlockLinearMap<K>& a, const BlockLinearMap<K>& coupling,
                              const BlockLinearMap<K>& b) {
  BlockLinearMap<K> r(a.input_size(), a.out_rows() + b.out_rows(), a.out_cols() + b.out_cols());
  for (int i = 0; i < a.input_size(); ++i)
    for (int j = 0; j < a.input_size(); ++j) {
      Matrix<K> m(r.out_rows(), r.out_cols());
      m.set_block(0, 0, a.image(i, j));
      m.set_block(0, a.out_cols(), coupling.image(i, j));
      m.set_block(a.out_rows(), a.out_cols(), b.image(i, j));
      r.image(i, j) = m;
    }
  return r;
}

template <typename K>
BlockLinearMap<K> block_stack(const BlockLinearMap<K>& top, const BlockLinearMap<K>& bottom) {
  if (top.out_cols() != bottom.out_cols()) throw std::invalid_argument("block_stack: width mismatch");
  BlockLinearMap<K> r(top.input_size(), top.out_rows() + bottom.out_rows(), top.out_cols());
  for (int i = 0; i < top.input_size(); ++i)
    for (int j = 0; j < top.input_size(); ++j) {
      Matrix<K> m(r.out_rows(), r.out_cols());
      m.set_block(0, 0, top.image(i, j));
      m.set_block(top.out_rows(), 0, bottom.image(i, j));
      r.image(i, j) = m;
    }
  return r;
}

// A^w(X_1,...,X_l) = A_{i_1}(X_1) ... A_{i_l}(X_l); the empty word gives I_L.
template <typename K>
Matrix<K> apply_word(const std::vector<BlockLinearMap<K>>& a, const Word& w,
                     const std::vector<Matrix<K>>& args) {
  if (w.size() != args.size()) throw std::invalid_argument("apply_word: arity mismatch");
  if (a.empty()) throw std::invalid_argument("apply_word: empty map tuple");
  const int big = a[0].out_rows();
  Matrix<K> r = Matrix<K>::identity(big);
  for (size_t t = 0; t < w.size(); ++t) {
    if (w[t] < 0 || w[t] >= static_cast<int>(a.size()))
      throw std::invalid_argument("apply_word: letter out of range");
    r = r * a[w[t]].apply(args[t]);
  }
  return r;
}

// T^*(X) := T(X^*)^*, so T^*(E_ij) = T(E_ji)^*.
template <typename K>
BlockLinearMap<K> adjoint(const BlockLinearMap<K>& t) {
  BlockLinearMap<K> r(t.input_size(), t.out_cols(), t.out_rows());
  for (int i = 0; i < t.input_size(); ++i)
    for (int j = 0; j < t.input_size(); ++j) r.image(i, j) = t.image(j, i).conj_transpose();
  return r;
}

template <typename K>
bool is_hermitian_map(const BlockLinearMap<K>& t) {
  return t.out_rows() == t.out_cols() && adjoint(t) == t;
}

}  // namespace ncfm
