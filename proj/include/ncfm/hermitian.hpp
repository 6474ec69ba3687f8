#pragma once

#include "ncfm/reduction.hpp"

namespace ncfm {

// Hermitian structure of minimal realizations over an ordered field. The
// congruence S = T diag(delta) T* is kept square-root free: J = sign(delta)
// and the scalings sqrt|delta| are folded into T only on the float path, so
// every verification here stays exact while the literal signature forms are
// produced in binary64.

// Congruence diagonalization S = T diag(delta) T* with T invertible, for
// hermitian S over a real scalar field.
template <typename K>
struct Congruence {
  Matrix<K> T;
  std::vector<K> delta;
};

template <typename K>
Congruence<K> congruence_diagonalize(const Matrix<K>& s) {
  static_assert(!field_traits<K>::is_complex, "real scalar fields only");
  if (s.rows() != s.cols()) throw std::invalid_argument("congruence_diagonalize: square input");
  if (s != s.conj_transpose()) throw std::invalid_argument("congruence_diagonalize: hermitian input");
  const int n = s.rows();
  Matrix<K> m = s;
  Matrix<K> u = Matrix<K>::identity(n);  // accumulated left transform: m = u s u*

  auto add_row_col = [&](int dst, int src, const K& f) {
    for (int j = 0; j < n; ++j) m(dst, j) = m(dst, j) + f * m(src, j);
    for (int i = 0; i < n; ++i) m(i, dst) = m(i, dst) + f * m(i, src);
    for (int j = 0; j < n; ++j) u(dst, j) = u(dst, j) + f * u(src, j);
  };
  auto swap_row_col = [&](int a, int b) {
    for (int j = 0; j < n; ++j) std::swap(m(a, j), m(b, j));
    for (int i = 0; i < n; ++i) std::swap(m(i, a), m(i, b));
    for (int j = 0; j < n; ++j) std::swap(u(a, j), u(b, j));
  };

  for (int k = 0; k < n; ++k) {
    if (field_traits<K>::is_zero(m(k, k))) {
      int diag = -1, off = -1;
      for (int j = k + 1; j < n && diag < 0; ++j)
        if (!field_traits<K>::is_zero(m(j, j))) diag = j;
      for (int j = k + 1; j < n && off < 0; ++j)
        if (!field_traits<K>::is_zero(m(k, j))) off = j;
      if (diag >= 0) {
        swap_row_col(k, diag);
      } else if (off >= 0) {
        // zero diagonal block with a nonzero coupling: e_k += e_off makes
        // the (k,k) entry 2 m(k,off) != 0 (char K != 2)
        add_row_col(k, off, field_traits<K>::one());
      } else {
        continue;  // row and trailing block vanish; delta_k stays 0
      }
    }
    K inv_p = field_traits<K>::one() / m(k, k);
    for (int i = k + 1; i < n; ++i) {
      if (field_traits<K>::is_zero(m(i, k))) continue;
      add_row_col(i, k, -m(i, k) * inv_p);
    }
  }

  Congruence<K> out;
  auto u_inv = inverse(u);
  if (!u_inv) throw std::logic_error("congruence_diagonalize: transform not invertible");
  out.T = *u_inv;
  out.delta.resize(n);
  for (int i = 0; i < n; ++i) out.delta[i] = m(i, i);
  return out;
}

inline std::vector<int> signs_of(const std::vector<Rational>& delta) {
  std::vector<int> j(delta.size());
  for (size_t i = 0; i < delta.size(); ++i) j[i] = sgn(delta[i]);
  return j;
}

template <typename K>
Matrix<K> diag_matrix(const std::vector<K>& d) {
  Matrix<K> m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

// Definiteness of a hermitian matrix by leading principal minors.
inline bool is_positive_definite(const Matrix<Rational>& f) {
  for (int k = 1; k <= f.rows(); ++k)
    if (sgn(determinant(f.block(0, 0, k, k))) <= 0) return false;
  return true;
}

inline bool is_negative_definite(const Matrix<Rational>& f) { return is_positive_definite(-f); }

// The unique hermitian S satisfying the structure relations
//   D* = D,  A_k*.S = S.A_k,  B_k*.S = C.A_k,  C.B_k = (C.B_k)*,
// solved on L independent controllability generators and then verified on
// every basis image. Returns nullopt iff verification fails, which
// certifies the realized function is not hermitian. Requires a minimal
// input and a hermitian centre.
template <typename K>
std::optional<Matrix<K>> structure_matrix(const FMRealization<K>& r) {
  for (const auto& y : r.centre)
    if (y != y.conj_transpose()) throw std::invalid_argument("structure_matrix: centre not hermitian");
  if (!is_minimal(r)) throw std::invalid_argument("structure_matrix: realization not minimal");

  if (r.D != r.D.conj_transpose()) return std::nullopt;
  if (r.L == 0) return Matrix<K>(0, 0);

  std::vector<BlockLinearMap<K>> adj_a, adj_b;
  for (int k = 0; k < r.d; ++k) {
    adj_a.push_back(adjoint(r.A[k]));
    adj_b.push_back(adjoint(r.B[k]));
  }
  Matrix<K> c_star = r.C.conj_transpose();

  auto sel = select_generators(r.A, r.B, r.L);
  if (!sel) throw std::logic_error("structure_matrix: minimal input without generators");
  Matrix<K> rhs(r.L, 0);
  for (const GeneratorIndex& g : sel->first) {
    Matrix<K> m = Matrix<K>::identity(r.L);
    for (size_t pos = 0; pos + 1 < g.tuple.size(); ++pos)
      m = m * adj_a[g.w[pos]].image_flat(g.tuple[pos]);
    rhs = hstack(rhs, (m * adj_a[g.k].image_flat(g.tuple.back()) * c_star).col(g.col));
  }
  auto v_inv = inverse(sel->second);
  if (!v_inv) throw std::logic_error("structure_matrix: generator columns not invertible");
  Matrix<K> s = rhs * (*v_inv);

  if (s != s.conj_transpose()) return std::nullopt;
  for (int k = 0; k < r.d; ++k)
    for (int cell = 0; cell < r.s * r.s; ++cell) {
      if (adj_a[k].image_flat(cell) * s != s * r.A[k].image_flat(cell)) return std::nullopt;
      if (adj_b[k].image_flat(cell) * s != r.C * r.A[k].image_flat(cell)) return std::nullopt;
      int i = cell / r.s, j = cell % r.s;
      Matrix<K> cb = r.C * r.B[k].image_flat(cell);
      Matrix<K> cb_swapped = r.C * r.B[k].image(j, i);
      if (cb != cb_swapped.conj_transpose()) return std::nullopt;
    }
  return s;
}

// The subspace identities that the structure matrix induces:
// ker S = intersection of ker A_k(X), Im S = span of Im A_k*(X) and
// ker C* = intersection of ker B_k(X).
template <typename K>
bool kernel_image_check(const Matrix<K>& s, const FMRealization<K>& r) {
  Subspace<K> ker_a(r.L), ker_b(r.L);
  Subspace<K> im_a_star(r.L);
  bool first = true;
  for (int k = 0; k < r.d; ++k) {
    BlockLinearMap<K> adj_a = adjoint(r.A[k]);
    for (int cell = 0; cell < r.s * r.s; ++cell) {
      Subspace<K> ka = kernel_basis(r.A[k].image_flat(cell));
      Subspace<K> kb = kernel_basis(r.B[k].image_flat(cell));
      if (first) {
        ker_a = ka;
        ker_b = kb;
        first = false;
      } else {
        ker_a = intersect_subspaces(ker_a, ka);
        ker_b = intersect_subspaces(ker_b, kb);
      }
      im_a_star.extend_with(adj_a.image_flat(cell));
    }
  }
  return kernel_basis(s) == ker_a && column_space(s.conj_transpose()) == im_a_star &&
         kernel_basis(r.C.conj_transpose()) == ker_b;
}

// Symmetric form of a minimal hermitian realization: hermitian maps
// A_check_k = T* (K [A_k*; B_k*]) T with K a left inverse of [S; C], and the
// square-root-free congruence data (T, delta, J = sign(delta)). The exact
// evaluation below uses diag(delta) where the literal signature form uses J.
template <typename K>
struct HermitianStructure {
  int d = 0, s = 0, L = 0;
  std::vector<Matrix<K>> centre;
  Matrix<K> D;
  Matrix<K> S;
  Matrix<K> T;
  std::vector<K> delta;
  std::vector<int> J;  // semi-signature diagonal: +1 / -1 / 0
  Matrix<K> C_check;                     // C (T*)^{-1}
  std::vector<BlockLinearMap<K>> A_check;  // hermitian maps

  // D + C_check (I - sum A_check_k(X_k - Y_k) diag(delta))^{-1}
  //       sum A_check_k(X_k - Y_k) C_check*  -- exactly the realized value.
  std::optional<Matrix<K>> evaluate_exact(const std::vector<Matrix<K>>& x) const {
    Matrix<K> m(L, L);
    for (int k = 0; k < d; ++k) m += A_check[k].apply(x[k] - centre[k]);
    auto pencil_inv = inverse(Matrix<K>::identity(L) - m * diag_matrix(delta));
    if (!pencil_inv) return std::nullopt;
    return D + C_check * (*pencil_inv) * m * C_check.conj_transpose();
  }
};

template <typename K>
std::optional<HermitianStructure<K>> symmetric_form(const FMRealization<K>& r, const Matrix<K>& s) {
  HermitianStructure<K> h;
  h.d = r.d;
  h.s = r.s;
  h.L = r.L;
  h.centre = r.centre;
  h.D = r.D;
  h.S = s;

  // K_left: left inverse of M = [S; C] (full column rank by minimality)
  Matrix<K> m = vstack(s, r.C);
  Matrix<K> gram = m.conj_transpose() * m;
  auto gram_inv = inverse(gram);
  if (!gram_inv) return std::nullopt;
  Matrix<K> k_left = (*gram_inv) * m.conj_transpose();

  std::vector<BlockLinearMap<K>> a_hat;
  for (int k = 0; k < r.d; ++k) {
    BlockLinearMap<K> adj_a = adjoint(r.A[k]);
    BlockLinearMap<K> adj_b = adjoint(r.B[k]);
    BlockLinearMap<K> hat(r.s, r.L, r.L);
    for (int cell = 0; cell < r.s * r.s; ++cell)
      hat.image_flat(cell) = k_left * vstack(adj_a.image_flat(cell), adj_b.image_flat(cell));
    // defining relations: A_k = A_hat_k . S and B_k = A_hat_k . C*
    for (int cell = 0; cell < r.s * r.s; ++cell) {
      if (hat.image_flat(cell) * s != r.A[k].image_flat(cell)) return std::nullopt;
      if (hat.image_flat(cell) * r.C.conj_transpose() != r.B[k].image_flat(cell)) return std::nullopt;
    }
    if (!is_hermitian_map(hat)) return std::nullopt;
    a_hat.push_back(hat);
  }

  Congruence<K> cong = congruence_diagonalize(s);
  h.T = cong.T;
  h.delta = cong.delta;
  if constexpr (field_traits<K>::is_exact) {
    h.J.resize(h.delta.size());
    for (size_t i = 0; i < h.delta.size(); ++i) h.J[i] = sgn(h.delta[i]);
  } else {
    h.J.resize(h.delta.size());
    for (size_t i = 0; i < h.delta.size(); ++i)
      h.J[i] = field_traits<K>::is_zero(h.delta[i]) ? 0 : (field_traits<K>::abs_score(h.delta[i]) == h.delta[i] ? 1 : -1);
  }

  Matrix<K> t_star_inv = *inverse(h.T.conj_transpose());
  h.C_check = r.C * t_star_inv;
  for (int k = 0; k < r.d; ++k) {
    BlockLinearMap<K> check =
        compose_const_right(compose_const_left(h.T.conj_transpose(), a_hat[k]), h.T);
    if (!is_hermitian_map(check)) return std::nullopt;
    h.A_check.push_back(check);
  }
  return h;
}

// Literal signature-form data in binary64: C_J = C_check sigma^{-1} and
// A_J = sigma A_check sigma with sigma = sqrt|delta| (1 at zero entries),
// so S = T_J J T_J* with T_J = T sigma.
struct FloatSymmetricForm {
  Matrix<double> D, C;
  std::vector<int> J;
  std::vector<Matrix<double>> A_images;  // flattened per map: d * s^2 images
  int d = 0, s = 0, L = 0;
  std::vector<Matrix<double>> centre;

  std::optional<Matrix<double>> evaluate(const std::vector<Matrix<double>>& x) const {
    Matrix<double> m(L, L);
    for (int k = 0; k < d; ++k) {
      Matrix<double> diff = x[k] - centre[k];
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) m += A_images[k * s * s + i * s + j] * diff(i, j);
    }
    Matrix<double> jm(L, L);
    for (int i = 0; i < L; ++i) jm(i, i) = static_cast<double>(J[i]);
    auto pencil_inv = inverse(Matrix<double>::identity(L) - m * jm);
    if (!pencil_inv) return std::nullopt;
    return D + C * (*pencil_inv) * m * C.conj_transpose();
  }
};

inline FloatSymmetricForm to_float_form(const HermitianStructure<Rational>& h) {
  FloatSymmetricForm f;
  f.d = h.d;
  f.s = h.s;
  f.L = h.L;
  f.D = to_float(h.D);
  f.J = h.J;
  for (const auto& y : h.centre) f.centre.push_back(to_float(y));
  std::vector<double> sigma(h.L), sigma_inv(h.L);
  for (int i = 0; i < h.L; ++i) {
    double a = std::abs(h.delta[static_cast<size_t>(i)].get_d());
    sigma[i] = a == 0.0 ? 1.0 : std::sqrt(a);
    sigma_inv[i] = 1.0 / sigma[i];
  }
  f.C = to_float(h.C_check);
  for (int j = 0; j < h.L; ++j)
    for (int i = 0; i < f.C.rows(); ++i) f.C(i, j) *= sigma_inv[j];
  for (int k = 0; k < h.d; ++k)
    for (int cell = 0; cell < h.s * h.s; ++cell) {
      Matrix<double> img = to_float(h.A_check[k].image_flat(cell));
      for (int i = 0; i < h.L; ++i)
        for (int j = 0; j < h.L; ++j) img(i, j) *= sigma[i] * sigma[j];
      f.A_images.push_back(img);
    }
  return f;
}

// Descriptor realization: the hermitian variant carries D and a diagonal
// pencil metric (exact delta or a float signature); the general variant
// carries B with an implicit identity metric.
template <typename K>
struct DescriptorRealization {
  int d = 0, s = 0, L = 0;
  std::vector<Matrix<K>> centre;
  std::optional<Matrix<K>> D;
  Matrix<K> C;
  std::optional<std::vector<K>> metric;  // diagonal; absent = identity
  std::optional<Matrix<K>> B;
  std::vector<BlockLinearMap<K>> A;

  Matrix<K> pencil(const std::vector<Matrix<K>>& x) const {
    const int n = x.at(0).rows();
    const int m = n / s;
    Matrix<K> lam = metric ? kron(Matrix<K>::identity(m), diag_matrix(*metric))
                           : Matrix<K>::identity(L * m);
    for (int k = 0; k < d; ++k)
      lam -= A[k].apply_blocks(x[k] - kron(Matrix<K>::identity(m), centre[k]));
    return lam;
  }
  bool dom_contains(const std::vector<Matrix<K>>& x) const { return is_invertible(pencil(x)); }

  std::optional<Matrix<K>> evaluate(const std::vector<Matrix<K>>& x) const {
    const int m = x.at(0).rows() / s;
    auto pencil_inv = inverse(pencil(x));
    if (!pencil_inv) return std::nullopt;
    Matrix<K> im = Matrix<K>::identity(m);
    if (B) return kron(im, C) * (*pencil_inv) * kron(im, *B);
    return kron(im, *D) +
           kron(im, C) * (*pencil_inv) * kron(im, C.conj_transpose());
  }
};

// Hermitian descriptor form (exact path): with E = F + C_check pinv(delta)
// C_check*, the bordered matrix S~ = [[diag(delta), C_check*],[C_check, E]]
// is hermitian and invertible for definite F; factoring S~^{-1} =
// T~ diag(delta_D) T~* gives
//   R(X) = D_D + C_D (diag(delta_D) - sum A_D_k(X_k-Y_k))^{-1} C_D*
// with D_D = D - E, C_D = [0 I_s] T~^{-*},
// A_D_k = T~^{-1} blkdiag(A_check_k, 0) T~^{-*}, and equal DOM.
template <typename K>
DescriptorRealization<K> descriptor_form(const HermitianStructure<K>& h, const Matrix<K>& f) {
  if (f.rows() != h.s || f != f.conj_transpose())
    throw std::invalid_argument("descriptor_form: F must be hermitian s x s");
  if constexpr (field_traits<K>::is_exact) {
    if (!is_positive_definite(f) && !is_negative_definite(f))
      throw std::invalid_argument("descriptor_form: F must be positive or negative definite");
  }

  std::vector<K> delta_pinv(h.delta.size());
  for (size_t i = 0; i < h.delta.size(); ++i)
    delta_pinv[i] = field_traits<K>::is_zero(h.delta[i]) ? field_traits<K>::zero()
                                                         : field_traits<K>::one() / h.delta[i];
  Matrix<K> c_check_star = h.C_check.conj_transpose();
  Matrix<K> e = f + h.C_check * diag_matrix(delta_pinv) * c_check_star;

  const int n = h.L + h.s;
  Matrix<K> s_tilde(n, n);
  s_tilde.set_block(0, 0, diag_matrix(h.delta));
  s_tilde.set_block(0, h.L, c_check_star);
  s_tilde.set_block(h.L, 0, h.C_check);
  s_tilde.set_block(h.L, h.L, e);
  auto s_tilde_inv = inverse(s_tilde);
  if (!s_tilde_inv) throw std::logic_error("descriptor_form: bordered matrix not invertible");

  Congruence<K> cong = congruence_diagonalize(*s_tilde_inv);
  Matrix<K> t_inv = *inverse(cong.T);
  Matrix<K> t_star_inv = t_inv.conj_transpose();

  DescriptorRealization<K> out;
  out.d = h.d;
  out.s = h.s;
  out.L = n;
  out.centre = h.centre;
  out.D = h.D - e;
  out.C = hstack(Matrix<K>(h.s, h.L), Matrix<K>::identity(h.s)) * t_star_inv;
  out.metric = cong.delta;
  for (int k = 0; k < h.d; ++k) {
    BlockLinearMap<K> a(h.s, n, n);
    for (int cell = 0; cell < h.s * h.s; ++cell) {
      Matrix<K> blk(n, n);
      blk.set_block(0, 0, h.A_check[k].image_flat(cell));
      a.image_flat(cell) = t_inv * blk * t_star_inv;
    }
    out.A.push_back(a);
  }
  return out;
}

// Literal float hermitian descriptor with a true signature metric.
inline DescriptorRealization<double> to_float_descriptor(const DescriptorRealization<Rational>& d) {
  DescriptorRealization<double> out;
  out.d = d.d;
  out.s = d.s;
  out.L = d.L;
  for (const auto& y : d.centre) out.centre.push_back(to_float(y));
  out.D = to_float(*d.D);
  const auto& delta = *d.metric;
  std::vector<double> sigma(delta.size()), sigma_inv(delta.size());
  std::vector<double> j(delta.size());
  for (size_t i = 0; i < delta.size(); ++i) {
    double v = delta[i].get_d();
    sigma[i] = std::sqrt(std::abs(v));
    sigma_inv[i] = 1.0 / sigma[i];
    j[i] = v > 0 ? 1.0 : -1.0;
  }
  out.metric = j;
  // C_J = C sigma^{-1}, A_J = sigma^{-1}... the descriptor scaling folds the
  // other way: pencil diag(delta) - A maps to J - sigma^{-1} A sigma^{-1}
  // under conjugation by sigma^{-1}, and C picks up sigma on the right.
  Matrix<double> c = to_float(d.C);
  for (int jj = 0; jj < c.cols(); ++jj)
    for (int i = 0; i < c.rows(); ++i) c(i, jj) *= sigma_inv[jj];
  out.C = c;
  for (int k = 0; k < d.d; ++k) {
    BlockLinearMap<double> a(d.s, d.L, d.L);
    for (int cell = 0; cell < d.s * d.s; ++cell) {
      Matrix<double> img = to_float(d.A[k].image_flat(cell));
      for (int r = 0; r < d.L; ++r)
        for (int cc = 0; cc < d.L; ++cc) img(r, cc) *= sigma_inv[r] * sigma_inv[cc];
      a.image_flat(cell) = img;
    }
    out.A.push_back(a);
  }
  return out;
}

// Part-5 package: when S is invertible, Q = S^{-1} C* satisfies
// B_k = A_k . Q, and the two alternative realizations below hold. When S is
// singular, no Q exists (the stacked linear system is inconsistent).
template <typename K>
struct InvertibleSForms {
  bool s_invertible = false;
  std::optional<Matrix<K>> Q;

  // exact evaluators for the two alternative forms (valid iff s_invertible)
  // alt1: D + C_check delta^{-1} (delta^{-1} - M)^{-1} M C_check*
  // alt2: D - C_check delta^{-1} C_check*
  //         + C_check (delta - delta M delta)^{-1} C_check*
  // with M = sum A_check_k(X_k - Y_k).
  std::optional<Matrix<K>> evaluate_alt1(const HermitianStructure<K>& h,
                                         const std::vector<Matrix<K>>& x) const {
    Matrix<K> m(h.L, h.L);
    for (int k = 0; k < h.d; ++k) m += h.A_check[k].apply(x[k] - h.centre[k]);
    std::vector<K> dinv(h.delta.size());
    for (size_t i = 0; i < h.delta.size(); ++i) dinv[i] = field_traits<K>::one() / h.delta[i];
    auto inv_pencil = inverse(diag_matrix(dinv) - m);
    if (!inv_pencil) return std::nullopt;
    return h.D + h.C_check * diag_matrix(dinv) * (*inv_pencil) * m * h.C_check.conj_transpose();
  }
  std::optional<Matrix<K>> evaluate_alt2(const HermitianStructure<K>& h,
                                         const std::vector<Matrix<K>>& x) const {
    Matrix<K> m(h.L, h.L);
    for (int k = 0; k < h.d; ++k) m += h.A_check[k].apply(x[k] - h.centre[k]);
    std::vector<K> dinv(h.delta.size());
    for (size_t i = 0; i < h.delta.size(); ++i) dinv[i] = field_traits<K>::one() / h.delta[i];
    Matrix<K> dd = diag_matrix(h.delta);
    auto inv_pencil = inverse(dd - dd * m * dd);
    if (!inv_pencil) return std::nullopt;
    Matrix<K> d_tilde = h.D - h.C_check * diag_matrix(dinv) * h.C_check.conj_transpose();
    return d_tilde + h.C_check * (*inv_pencil) * h.C_check.conj_transpose();
  }
};

template <typename K>
InvertibleSForms<K> invertible_s_forms(const HermitianStructure<K>& h, const FMRealization<K>& r) {
  InvertibleSForms<K> out;
  out.s_invertible = true;
  for (const K& dk : h.delta)
    if (field_traits<K>::is_zero(dk)) out.s_invertible = false;

  // stacked system B_k(E_cell) = A_k(E_cell) Q over all k, cells
  Matrix<K> lhs(0, h.L), rhs(0, h.s);
  for (int k = 0; k < r.d; ++k)
    for (int cell = 0; cell < r.s * r.s; ++cell) {
      lhs = vstack(lhs, r.A[k].image_flat(cell));
      rhs = vstack(rhs, r.B[k].image_flat(cell));
    }
  bool solvable = rank(lhs) == rank(hstack(lhs, rhs));

  if (!out.s_invertible) {
    if (solvable) throw std::logic_error("invertible_s_forms: singular S but Q system solvable");
    return out;
  }
  auto s_inv = inverse(h.S);
  out.Q = (*s_inv) * r.C.conj_transpose();
  for (int k = 0; k < r.d; ++k)
    for (int cell = 0; cell < r.s * r.s; ++cell)
      if (r.A[k].image_flat(cell) * (*out.Q) != r.B[k].image_flat(cell))
        throw std::logic_error("invertible_s_forms: Q relation failed");
  return out;
}

// General FM <-> descriptor conversions (no hermitian structure needed):
// the descriptor gains one s-block of state, the FM direction keeps the
// dimension and reads D off C_D B_D.
template <typename K>
DescriptorRealization<K> fm_to_descriptor(const FMRealization<K>& r) {
  DescriptorRealization<K> out;
  out.d = r.d;
  out.s = r.s;
  out.L = r.L + r.s;
  out.centre = r.centre;
  out.C = hstack(r.C, r.D);
  out.B = vstack(Matrix<K>(r.L, r.s), Matrix<K>::identity(r.s));
  for (int k = 0; k < r.d; ++k) {
    BlockLinearMap<K> a(r.s, out.L, out.L);
    for (int cell = 0; cell < r.s * r.s; ++cell) {
      Matrix<K> blk(out.L, out.L);
      blk.set_block(0, 0, r.A[k].image_flat(cell));
      blk.set_block(0, r.L, r.B[k].image_flat(cell));
      a.image_flat(cell) = blk;
    }
    out.A.push_back(a);
  }
  return out;
}

template <typename K>
FMRealization<K> descriptor_to_fm(const DescriptorRealization<K>& d) {
  if (!d.B || d.metric) throw std::invalid_argument("descriptor_to_fm: general descriptor expected");
  FMRealization<K> out;
  out.d = d.d;
  out.s = d.s;
  out.centre = d.centre;
  out.L = d.L;
  out.C = d.C;
  out.D = d.C * (*d.B);
  for (int k = 0; k < d.d; ++k) {
    out.A.push_back(d.A[k]);
    out.B.push_back(compose_const_right(d.A[k], *d.B));
  }
  return out;
}

}  // namespace ncfm
