#pragma once

#include <string>

#include "ncfm/realization.hpp"

namespace ncfm {

// Smallest A-invariant subspace containing every Im B_k(E_ij), computed by
// the increasing chain C_0 <= C_1 <= ..., which stabilizes in at most L-1
// steps.
template <typename K>
Subspace<K> controllability_space(const std::vector<BlockLinearMap<K>>& a,
                                  const std::vector<BlockLinearMap<K>>& b) {
  const int L = a.at(0).out_rows();
  const int s = a.at(0).input_size();
  Subspace<K> space(L);
  for (const auto& bk : b)
    for (int cell = 0; cell < s * s; ++cell) space.extend_with(bk.image_flat(cell));
  while (true) {
    bool grew = false;
    Matrix<K> basis = space.basis();
    for (const auto& ak : a)
      for (int cell = 0; cell < s * s; ++cell)
        grew |= space.extend_with(ak.image_flat(cell) * basis);
    if (!grew) break;
  }
  return space;
}

// Largest A-invariant subspace inside ker C, via the decreasing chain
// V_0 = ker C, V_{t+1} = V_t intersect preimages under every A_k(E_ij).
template <typename K>
Subspace<K> unobservable_space(const Matrix<K>& c, const std::vector<BlockLinearMap<K>>& a) {
  const int s = a.at(0).input_size();
  Subspace<K> v = kernel_basis(c);
  while (true) {
    Subspace<K> next = v;
    for (const auto& ak : a)
      for (int cell = 0; cell < s * s; ++cell)
        next = intersect_subspaces(next, preimage_subspace(ak.image_flat(cell), v));
    if (next == v) break;
    v = next;
  }
  return v;
}

// Finite truncation of the controllability matrix: blocks (A^w . B_k)(Z)
// over words |w| <= l_max (canonical order), then k, then basis tuples
// Z in E_s^{|w|+1}.
template <typename K>
Matrix<K> controllability_matrix(const std::vector<BlockLinearMap<K>>& a,
                                 const std::vector<BlockLinearMap<K>>& b, int l_max) {
  const int L = a.at(0).out_rows();
  const int s = a.at(0).input_size();
  const int d = static_cast<int>(a.size());
  const int out_cols = b.at(0).out_cols();
  long cols = 0;
  for (int len = 0; len <= l_max; ++len) {
    long words = 1;
    for (int t = 0; t < len; ++t) words *= d;
    cols += words * d * basis_tuple_count(s, len + 1) * out_cols;
  }
  Matrix<K> result(L, static_cast<int>(cols));
  int at = 0;
  for (const Word& w : words_up_to(d, l_max)) {
    const int len = static_cast<int>(w.size());
    for (int k = 0; k < d; ++k)
      for (const BasisTuple& t : basis_tuples(s, len + 1)) {
        Matrix<K> prefix = Matrix<K>::identity(L);
        for (int pos = 0; pos < len; ++pos) prefix = prefix * a[w[pos]].image_flat(t[pos]);
        result.set_block(0, at, prefix * b[k].image_flat(t[len]));
        at += out_cols;
      }
  }
  return result;
}

// Finite truncation of the observability matrix: blocks C . A^w(Z) stacked
// over words |w| <= l_max, basis tuples Z in E_s^{|w|}.
template <typename K>
Matrix<K> observability_matrix(const Matrix<K>& c, const std::vector<BlockLinearMap<K>>& a,
                               int l_max) {
  const int L = a.at(0).out_rows();
  const int s = a.at(0).input_size();
  const int d = static_cast<int>(a.size());
  long rows = 0;
  for (int len = 0; len <= l_max; ++len) {
    long words = 1;
    for (int t = 0; t < len; ++t) words *= d;
    rows += words * basis_tuple_count(s, len) * c.rows();
  }
  Matrix<K> result(static_cast<int>(rows), L);
  int at = 0;
  for (const Word& w : words_up_to(d, l_max)) {
    const int len = static_cast<int>(w.size());
    for (const BasisTuple& t : basis_tuples(s, len)) {
      Matrix<K> m = c;
      for (int pos = 0; pos < len; ++pos) m = m * a[w[pos]].image_flat(t[pos]);
      result.set_block(at, 0, m);
      at += c.rows();
    }
  }
  return result;
}

template <typename K>
bool is_controllable(const FMRealization<K>& r) {
  return controllability_space(r.A, r.B).dim() == r.L;
}

template <typename K>
bool is_observable(const FMRealization<K>& r) {
  return unobservable_space(r.C, r.A).dim() == 0;
}

template <typename K>
bool is_minimal(const FMRealization<K>& r) {
  return is_controllable(r) && is_observable(r);
}

template <typename K>
struct KalmanReport {
  int original_L = 0;
  int dim_controllable = 0;
  int dim_unobservable = 0;
  int dim_intersection = 0;
  int reduced_L = 0;
  Matrix<K> basis_change;  // columns ordered H2, H1, H4, H3
};

namespace detail {

// Greedily extends `base` by candidate columns (in order) until it spans
// `target_dim` dimensions; returns the chosen columns.
template <typename K>
Matrix<K> greedy_complete(Subspace<K>& base, const Matrix<K>& candidates, int target_dim) {
  Matrix<K> chosen(base.ambient_dim(), 0);
  for (int j = 0; j < candidates.cols() && base.dim() < target_dim; ++j) {
    Matrix<K> v = candidates.col(j);
    if (base.extend_with(v)) chosen = hstack(chosen, v);
  }
  return chosen;
}

}  // namespace detail

// Kalman decomposition: splits K^L = H2 + H1 + H4 + H3 with H1 = C ∩ NO,
// H2 a complement of H1 in C, H3 a complement of H1 in NO, H4 the rest, and
// returns the controllable-observable corner realization of dimension
// dim C - dim(C ∩ NO) together with the report. Complements are completed
// greedily, from the computed subspace bases for H2/H3 and from standard
// basis vectors in index order for H4, so the output is deterministic.
template <typename K>
std::pair<FMRealization<K>, KalmanReport<K>> kalman_reduce(const FMRealization<K>& r) {
  const int L = r.L;
  Subspace<K> cont = controllability_space(r.A, r.B);
  Subspace<K> unobs = unobservable_space(r.C, r.A);
  Subspace<K> h1 = intersect_subspaces(cont, unobs);

  Subspace<K> acc = h1;
  Matrix<K> h2 = detail::greedy_complete(acc, cont.basis(), cont.dim());
  Matrix<K> h3 = detail::greedy_complete(acc, unobs.basis(), acc.dim() + unobs.dim() - h1.dim());
  Matrix<K> h4 = detail::greedy_complete(acc, Matrix<K>::identity(L), L);

  Matrix<K> p = hstack(hstack(h2, h1.basis()), hstack(h4, h3));
  auto p_inv = inverse(p);
  if (!p_inv) throw std::logic_error("kalman_reduce: basis change not invertible");

  KalmanReport<K> report;
  report.original_L = L;
  report.dim_controllable = cont.dim();
  report.dim_unobservable = unobs.dim();
  report.dim_intersection = h1.dim();
  report.reduced_L = cont.dim() - h1.dim();
  report.basis_change = p;

  const int lt = report.reduced_L;
  FMRealization<K> red;
  red.d = r.d;
  red.s = r.s;
  red.centre = r.centre;
  red.L = lt;
  red.D = r.D;
  red.C = (r.C * p).block(0, 0, r.out_rows(), lt);
  for (int k = 0; k < r.d; ++k) {
    BlockLinearMap<K> ak(r.s, lt, lt), bk(r.s, lt, r.out_cols());
    for (int cell = 0; cell < r.s * r.s; ++cell) {
      Matrix<K> conj = (*p_inv) * r.A[k].image_flat(cell) * p;
      ak.image_flat(cell) = conj.block(0, 0, lt, lt);
      bk.image_flat(cell) = ((*p_inv) * r.B[k].image_flat(cell)).block(0, 0, lt, r.out_cols());
    }
    red.A.push_back(ak);
    red.B.push_back(bk);
  }
  return {red, report};
}

// One controllability-matrix column, identified by (word, basis tuple for
// all |w|+1 positions, map index k, column c of the L x out_cols block).
struct GeneratorIndex {
  Word w;
  BasisTuple tuple;
  int k = 0;
  int col = 0;
};

// Enumerates controllability generator columns in canonical order and keeps
// the first `count` linearly independent ones. Returns the picks and the
// invertible column matrix; empty optional if the span never reaches
// `count` (tuple not controllable enough).
template <typename K>
std::optional<std::pair<std::vector<GeneratorIndex>, Matrix<K>>> select_generators(
    const std::vector<BlockLinearMap<K>>& a, const std::vector<BlockLinearMap<K>>& b, int count) {
  const int L = a.at(0).out_rows();
  const int s = a.at(0).input_size();
  const int d = static_cast<int>(a.size());
  std::vector<GeneratorIndex> picks;
  Subspace<K> span(L);
  Matrix<K> cols(L, 0);

  // prefixes at current word length, in canonical (word, tuple) order
  struct Prefix {
    Word w;
    BasisTuple t;
    Matrix<K> value;
  };
  std::vector<Prefix> level{{Word{}, BasisTuple{}, Matrix<K>::identity(L)}};
  for (int len = 0; len <= std::max(0, L - 1); ++len) {
    int dim_before = span.dim();
    for (const Prefix& pre : level) {
      for (int k = 0; k < d; ++k)
        for (int cell = 0; cell < s * s; ++cell) {
          Matrix<K> block = pre.value * b[k].image_flat(cell);
          for (int c = 0; c < block.cols(); ++c) {
            Matrix<K> v = block.col(c);
            if (!span.extend_with(v)) continue;
            GeneratorIndex g;
            g.w = pre.w;
            g.tuple = pre.t;
            g.tuple.push_back(cell);
            g.k = k;
            g.col = c;
            picks.push_back(g);
            cols = hstack(cols, v);
            if (static_cast<int>(picks.size()) == count) return {{picks, cols}};
          }
        }
    }
    // The chain of level spans is monotone; once a whole level adds nothing
    // the span has stabilized below `count`.
    if (span.dim() == dim_before || len == L - 1) break;
    std::vector<Prefix> next;
    next.reserve(level.size() * d * s * s);
    for (const Prefix& pre : level)
      for (int letter = 0; letter < d; ++letter)
        for (int cell = 0; cell < s * s; ++cell) {
          Prefix p2;
          p2.w = pre.w;
          p2.w.push_back(letter);
          p2.t = pre.t;
          p2.t.push_back(cell);
          p2.value = pre.value * a[letter].image_flat(cell);
          if (p2.value.is_zero()) continue;
          next.push_back(std::move(p2));
        }
    level = std::move(next);
  }
  return std::nullopt;
}

// Evaluates the generator column of another realization (or the adjoint
// side) at the same index.
template <typename K>
Matrix<K> generator_column(const std::vector<BlockLinearMap<K>>& a,
                           const std::vector<BlockLinearMap<K>>& b, const GeneratorIndex& g) {
  const int L = a.at(0).out_rows();
  Matrix<K> m = Matrix<K>::identity(L);
  for (size_t pos = 0; pos + 1 < g.tuple.size(); ++pos) m = m * a[g.w[pos]].image_flat(g.tuple[pos]);
  return (m * b[g.k].image_flat(g.tuple.back())).col(g.col);
}

enum class SimilarityStatus { Similar, NotSimilar, NotMinimal };

template <typename K>
struct SimilarityResult {
  SimilarityStatus status = SimilarityStatus::NotSimilar;
  Matrix<K> T;  // valid iff status == Similar
  std::string reason;
};

// Decides unique similarity of two minimal realizations at the same centre.
// Builds the candidate T on controllability generators (T maps R1 columns
// to R2 columns), then verifies C2 T = C1, B2_k = T B1_k and
// A2_k(.) T = T A1_k(.) on every basis image. The constructed T is only
// trusted after verification; a failed check certifies the realizations are
// not similar (hence the functions not equivalent).
template <typename K>
SimilarityResult<K> similarity_between(const FMRealization<K>& r1, const FMRealization<K>& r2) {
  if (r1.d != r2.d || r1.s != r2.s) throw std::invalid_argument("similarity_between: centre shape mismatch");
  for (int k = 0; k < r1.d; ++k)
    if (r1.centre[k] != r2.centre[k]) throw std::invalid_argument("similarity_between: centres differ");

  SimilarityResult<K> out;
  if (!is_minimal(r1) || !is_minimal(r2)) {
    out.status = SimilarityStatus::NotMinimal;
    out.reason = "inputs must be minimal";
    return out;
  }
  if (r1.L != r2.L) {
    out.reason = "state dimensions differ";
    return out;
  }
  if (r1.D != r2.D) {
    out.reason = "constant terms differ";
    return out;
  }
  if (r1.L == 0) {
    out.status = SimilarityStatus::Similar;
    out.T = Matrix<K>(0, 0);
    return out;
  }

  auto sel = select_generators(r1.A, r1.B, r1.L);
  if (!sel) {
    out.status = SimilarityStatus::NotMinimal;
    out.reason = "generator span defect";
    return out;
  }
  Matrix<K> v2(r1.L, 0);
  for (const GeneratorIndex& g : sel->first) v2 = hstack(v2, generator_column(r2.A, r2.B, g));
  auto v1_inv = inverse(sel->second);
  if (!v1_inv) throw std::logic_error("similarity_between: generator columns not invertible");
  Matrix<K> t = v2 * (*v1_inv);
  if (!is_invertible(t)) {
    out.reason = "candidate similarity is singular";
    return out;
  }

  if (r2.C * t != r1.C) {
    out.reason = "C relation fails";
    return out;
  }
  for (int k = 0; k < r1.d; ++k)
    for (int cell = 0; cell < r1.s * r1.s; ++cell) {
      if (r2.B[k].image_flat(cell) != t * r1.B[k].image_flat(cell)) {
        out.reason = "B relation fails";
        return out;
      }
      if (r2.A[k].image_flat(cell) * t != t * r1.A[k].image_flat(cell)) {
        out.reason = "A relation fails";
        return out;
      }
    }
  out.status = SimilarityStatus::Similar;
  out.T = t;
  return out;
}

}  // namespace ncfm
