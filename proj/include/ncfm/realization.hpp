#pragma once

#include <optional>

#include "ncfm/linmap.hpp"
#include "ncfm/ncexpr.hpp"

namespace ncfm {

// State-space pencil realization
//   R(X) = D + C (I_L - sum_k A_k(X_k - Y_k))^{-1} sum_k B_k(X_k - Y_k)
// centred at a matrix point Y in (K^{s x s})^d, extended to sm x sm inputs
// blockwise. D may be rectangular (alpha*s x beta*s) for matrix-valued
// functions; the scalar-valued case has out_rows == out_cols == s.
template <typename K>
struct FMRealization {
  int d = 0;
  int s = 0;
  std::vector<Matrix<K>> centre;       // d matrices, s x s
  int L = 0;
  Matrix<K> D;                         // out_rows x out_cols
  Matrix<K> C;                         // out_rows x L
  std::vector<BlockLinearMap<K>> A;    // d maps s -> L x L
  std::vector<BlockLinearMap<K>> B;    // d maps s -> L x out_cols

  int out_rows() const { return D.rows(); }
  int out_cols() const { return D.cols(); }

  void check_consistent() const {
    if (static_cast<int>(centre.size()) != d || static_cast<int>(A.size()) != d ||
        static_cast<int>(B.size()) != d)
      throw std::invalid_argument("FMRealization: tuple arity mismatch");
    for (const auto& y : centre)
      if (y.rows() != s || y.cols() != s) throw std::invalid_argument("FMRealization: centre size");
    if (C.rows() != D.rows() || C.cols() != L) throw std::invalid_argument("FMRealization: C shape");
    for (const auto& a : A)
      if (a.input_size() != s || a.out_rows() != L || a.out_cols() != L)
        throw std::invalid_argument("FMRealization: A shape");
    for (const auto& b : B)
      if (b.input_size() != s || b.out_rows() != L || b.out_cols() != D.cols())
        throw std::invalid_argument("FMRealization: B shape");
  }

  int level_of(const std::vector<Matrix<K>>& x) const {
    if (static_cast<int>(x.size()) != d) throw std::invalid_argument("FMRealization: point arity");
    const int n = x[0].rows();
    for (const auto& xk : x)
      if (xk.rows() != n || xk.cols() != n) throw std::invalid_argument("FMRealization: point sizes differ");
    if (n % s != 0) throw std::invalid_argument("FMRealization: size not a multiple of s");
    return n / s;
  }

  // Lambda(X) = I_{Lm} - sum_k (X_k - I_m (x) Y_k) A_k.
  Matrix<K> pencil(const std::vector<Matrix<K>>& x) const {
    const int m = level_of(x);
    Matrix<K> lam = Matrix<K>::identity(L * m);
    for (int k = 0; k < d; ++k)
      lam -= A[k].apply_blocks(x[k] - kron(Matrix<K>::identity(m), centre[k]));
    return lam;
  }

  bool dom_contains(const std::vector<Matrix<K>>& x) const { return is_invertible(pencil(x)); }

  // I_m (x) D + (I_m (x) C) Lambda(X)^{-1} sum_k (X_k - I_m (x) Y_k) B_k.
  std::optional<Matrix<K>> evaluate(const std::vector<Matrix<K>>& x) const {
    const int m = level_of(x);
    auto lam_inv = inverse(pencil(x));
    if (!lam_inv) return std::nullopt;
    Matrix<K> rhs(L * m, out_cols() * m);
    for (int k = 0; k < d; ++k)
      rhs += B[k].apply_blocks(x[k] - kron(Matrix<K>::identity(m), centre[k]));
    Matrix<K> im = Matrix<K>::identity(m);
    return kron(im, D) + kron(im, C) * (*lam_inv) * rhs;
  }

  // C A^w(Z_1..Z_l) B_k(Z_{l+1}); the empty-word convention returns D.
  Matrix<K> tt_coefficient(const Word& w, int k, const std::vector<Matrix<K>>& z) const {
    if (w.size() + 1 != z.size()) throw std::invalid_argument("tt_coefficient: arity mismatch");
    std::vector<Matrix<K>> head(z.begin(), z.end() - 1);
    return C * apply_word(A, w, head) * B[k].apply(z.back());
  }
  Matrix<K> tt_constant() const { return D; }
};

// Case 1 of synthesis: constants. L=1, D=K*I_s, C=0, all maps zero.
template <typename K>
FMRealization<K> synth_const(const K& value, const std::vector<Matrix<K>>& centre) {
  const int d = static_cast<int>(centre.size());
  const int s = centre[0].rows();
  FMRealization<K> r;
  r.d = d;
  r.s = s;
  r.centre = centre;
  r.L = 1;
  r.D = Matrix<K>::identity(s) * value;
  r.C = Matrix<K>(s, 1);
  r.A.assign(d, BlockLinearMap<K>::zero(s, 1, 1));
  r.B.assign(d, BlockLinearMap<K>::zero(s, 1, s));
  return r;
}

// Case 2: monomials x_j. L=s, D=Y_j, C=I_s, B_j=Id, all else zero.
template <typename K>
FMRealization<K> synth_var(int j, const std::vector<Matrix<K>>& centre) {
  const int d = static_cast<int>(centre.size());
  if (j < 0 || j >= d) throw std::invalid_argument("synth_var: index out of range");
  const int s = centre[0].rows();
  FMRealization<K> r;
  r.d = d;
  r.s = s;
  r.centre = centre;
  r.L = s;
  r.D = centre[j];
  r.C = Matrix<K>::identity(s);
  r.A.assign(d, BlockLinearMap<K>::zero(s, s, s));
  r.B.assign(d, BlockLinearMap<K>::zero(s, s, s));
  r.B[j] = BlockLinearMap<K>::id(s);
  return r;
}

// Left scaling by a constant: D -> K D, C -> K C, maps unchanged.
template <typename K>
FMRealization<K> synth_scale_left(const Matrix<K>& k, FMRealization<K> r) {
  if (k.cols() != r.D.rows()) throw std::invalid_argument("synth_scale_left: shape mismatch");
  r.D = k * r.D;
  r.C = k * r.C;
  return r;
}

// Right scaling: D -> D K, B_k -> B_k . K, A and C unchanged.
template <typename K>
FMRealization<K> synth_scale_right(FMRealization<K> r, const Matrix<K>& k) {
  if (r.D.cols() != k.rows()) throw std::invalid_argument("synth_scale_right: shape mismatch");
  r.D = r.D * k;
  for (auto& b : r.B) b = compose_const_right(b, k);
  return r;
}

template <typename K>
FMRealization<K> synth_scale_left(const K& c, const FMRealization<K>& r) {
  return synth_scale_left(Matrix<K>::identity(r.D.rows()) * c, r);
}

template <typename K>
void check_same_centre(const FMRealization<K>& a, const FMRealization<K>& b) {
  if (a.d != b.d || a.s != b.s) throw std::invalid_argument("synthesis: centre arity/size mismatch");
  for (int k = 0; k < a.d; ++k)
    if (a.centre[k] != b.centre[k]) throw std::invalid_argument("synthesis: centre mismatch");
}

// Case 3: parallel connection. Block order keeps the first operand's state
// block on top, matching the worked constructions this is tested against.
template <typename K>
FMRealization<K> synth_add(const FMRealization<K>& r1, const FMRealization<K>& r2) {
  check_same_centre(r1, r2);
  FMRealization<K> r;
  r.d = r1.d;
  r.s = r1.s;
  r.centre = r1.centre;
  r.L = r1.L + r2.L;
  r.D = r1.D + r2.D;
  r.C = hstack(r1.C, r2.C);
  for (int k = 0; k < r.d; ++k) {
    r.A.push_back(block_diag(r1.A[k], r2.A[k]));
    r.B.push_back(block_stack(r1.B[k], r2.B[k]));
  }
  return r;
}

// Case 4: series connection. D = D1 D2, C = [C1  D1 C2], upper-triangular A
// with coupling B1_k . C2 and B = [B1_k . D2 ; B2_k].
template <typename K>
FMRealization<K> synth_mul(const FMRealization<K>& r1, const FMRealization<K>& r2) {
  check_same_centre(r1, r2);
  FMRealization<K> r;
  r.d = r1.d;
  r.s = r1.s;
  r.centre = r1.centre;
  r.L = r1.L + r2.L;
  r.D = r1.D * r2.D;
  r.C = hstack(r1.C, r1.D * r2.C);
  for (int k = 0; k < r.d; ++k) {
    r.A.push_back(block_upper(r1.A[k], compose_const_right(r1.B[k], r2.C), r2.A[k]));
    r.B.push_back(block_stack(compose_const_right(r1.B[k], r2.D), r2.B[k]));
  }
  return r;
}

// Case 5: inversion via the Schur complement argument. Same L,
// D -> D^{-1}, C -> D^{-1} C, A_k -> A_k - B_k . (D^{-1} C),
// B_k -> -B_k . D^{-1}. Fails iff D is singular.
template <typename K>
std::optional<FMRealization<K>> synth_inv(const FMRealization<K>& r1) {
  auto d_inv = inverse(r1.D);
  if (!d_inv) return std::nullopt;
  FMRealization<K> r;
  r.d = r1.d;
  r.s = r1.s;
  r.centre = r1.centre;
  r.L = r1.L;
  r.D = *d_inv;
  r.C = *d_inv * r1.C;
  Matrix<K> dc = *d_inv * r1.C;
  for (int k = 0; k < r.d; ++k) {
    r.A.push_back(r1.A[k] - compose_const_right(r1.B[k], dc));
    r.B.push_back(-compose_const_right(r1.B[k], *d_inv));
  }
  return r;
}

// Structural synthesis dispatching to the five combinators; empty optional
// when the centre hits a singular inverse (centre not in the domain).
template <typename K>
std::optional<FMRealization<K>> synthesize(const ExprPtr& e, const std::vector<Matrix<K>>& centre) {
  switch (e->kind) {
    case NcExpr::Kind::Const:
      return synth_const(field_traits<K>::from_rational(e->value), centre);
    case NcExpr::Kind::Var:
      return synth_var(e->var, centre);
    case NcExpr::Kind::Add: {
      auto a = synthesize(e->left, centre), b = synthesize(e->right, centre);
      if (!a || !b) return std::nullopt;
      return synth_add(*a, *b);
    }
    case NcExpr::Kind::Mul: {
      auto a = synthesize(e->left, centre), b = synthesize(e->right, centre);
      if (!a || !b) return std::nullopt;
      return synth_mul(*a, *b);
    }
    case NcExpr::Kind::Inv: {
      auto a = synthesize(e->left, centre);
      if (!a) return std::nullopt;
      return synth_inv(*a);
    }
    case NcExpr::Kind::ScaleLeft: {
      auto a = synthesize(e->left, centre);
      if (!a) return std::nullopt;
      return synth_scale_left(field_traits<K>::from_rational(e->value), *a);
    }
    case NcExpr::Kind::ScaleRight: {
      auto a = synthesize(e->left, centre);
      if (!a) return std::nullopt;
      return synth_scale_right(*a, Matrix<K>::identity(a->D.cols()) *
                                       field_traits<K>::from_rational(e->value));
    }
  }
  return std::nullopt;
}

}  // namespace ncfm
