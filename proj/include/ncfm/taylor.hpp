#pragma once

#include <map>
#include <optional>

#include "ncfm/ncexpr.hpp"
#include "ncfm/words.hpp"

namespace ncfm {

// Truncated nc power-series table of an expression around a matrix centre.
// coeff[w] holds the |w|-linear coefficient evaluated on every basis tuple
// from E_s^{|w|}, in canonical tuple order; multilinearity is implicit in
// the basis indexing. This table is computed by structural recursion on the
// AST over truncated free power series and serves as the independent oracle
// for realization-side coefficients.
template <typename K>
struct TaylorTable {
  int d = 0;
  int s = 0;
  int order = 0;
  std::vector<Matrix<K>> centre;
  std::map<Word, std::vector<Matrix<K>>> coeff;

  const Matrix<K>& at(const Word& w, const BasisTuple& t) const {
    return coeff.at(w)[basis_tuple_index(s, t)];
  }
  const Matrix<K>& constant_term() const { return coeff.at(Word{})[0]; }
};

namespace detail {

template <typename K>
TaylorTable<K> zero_table(int d, int s, int order, const std::vector<Matrix<K>>& centre) {
  TaylorTable<K> t{d, s, order, centre, {}};
  for (const Word& w : words_up_to(d, order))
    t.coeff[w] = std::vector<Matrix<K>>(basis_tuple_count(s, static_cast<int>(w.size())), Matrix<K>(s, s));
  return t;
}

// Cauchy convolution over word factorizations w = a b, with basis indices
// split accordingly and values chained by matrix product.
template <typename K>
TaylorTable<K> table_mul(const TaylorTable<K>& a, const TaylorTable<K>& b) {
  TaylorTable<K> r = zero_table(a.d, a.s, a.order, a.centre);
  const int cells = a.s * a.s;
  for (auto& [w, vals] : r.coeff) {
    const int len = static_cast<int>(w.size());
    for (int cut = 0; cut <= len; ++cut) {
      Word head(w.begin(), w.begin() + cut);
      Word tail(w.begin() + cut, w.end());
      const auto& av = a.coeff.at(head);
      const auto& bv = b.coeff.at(tail);
      const int tail_count = basis_tuple_count(a.s, len - cut);
      for (int idx = 0; idx < static_cast<int>(vals.size()); ++idx) {
        int head_idx = idx / tail_count;
        int tail_idx = idx % tail_count;
        vals[idx] += av[head_idx] * bv[tail_idx];
      }
    }
    (void)cells;
  }
  return r;
}

// Neumann recursion for the inverse series: R'_empty = D^{-1} and
// R'_w = -D^{-1} sum_{w = a b, a nonempty} R_a . R'_b.
template <typename K>
std::optional<TaylorTable<K>> table_inv(const TaylorTable<K>& a) {
  auto d0_inv = inverse(a.constant_term());
  if (!d0_inv) return std::nullopt;
  TaylorTable<K> r = zero_table(a.d, a.s, a.order, a.centre);
  r.coeff[Word{}][0] = *d0_inv;
  for (int len = 1; len <= a.order; ++len) {
    for (const Word& w : words_of_length(a.d, len)) {
      auto& vals = r.coeff[w];
      const int tuple_count = static_cast<int>(vals.size());
      for (int cut = 1; cut <= len; ++cut) {
        Word head(w.begin(), w.begin() + cut);
        Word tail(w.begin() + cut, w.end());
        const auto& av = a.coeff.at(head);
        const auto& rv = r.coeff.at(tail);
        const int tail_count = basis_tuple_count(a.s, len - cut);
        for (int idx = 0; idx < tuple_count; ++idx)
          vals[idx] += av[idx / tail_count] * rv[idx % tail_count];
      }
      for (int idx = 0; idx < tuple_count; ++idx) vals[idx] = -(*d0_inv) * vals[idx];
    }
  }
  return r;
}

}  // namespace detail

// Computes the truncated table of e around centre Y up to the given order.
// Empty optional iff the centre is outside the domain of some inverse.
template <typename K>
std::optional<TaylorTable<K>> taylor_table(const ExprPtr& e, const std::vector<Matrix<K>>& centre,
                                           int order) {
  const int d = static_cast<int>(centre.size());
  const int s = centre[0].rows();
  switch (e->kind) {
    case NcExpr::Kind::Const: {
      TaylorTable<K> t = detail::zero_table(d, s, order, centre);
      t.coeff[Word{}][0] = Matrix<K>::identity(s) * field_traits<K>::from_rational(e->value);
      return t;
    }
    case NcExpr::Kind::Var: {
      TaylorTable<K> t = detail::zero_table(d, s, order, centre);
      t.coeff[Word{}][0] = centre[e->var];
      if (order >= 1) {
        Word w{e->var};
        for (int cell = 0; cell < s * s; ++cell)
          t.coeff[w][cell] = Matrix<K>::unit(s, s, cell / s, cell % s);
      }
      return t;
    }
    case NcExpr::Kind::Add: {
      auto a = taylor_table(e->left, centre, order);
      auto b = taylor_table(e->right, centre, order);
      if (!a || !b) return std::nullopt;
      TaylorTable<K> t = *a;
      for (auto& [w, vals] : t.coeff) {
        const auto& bv = b->coeff.at(w);
        for (size_t i = 0; i < vals.size(); ++i) vals[i] += bv[i];
      }
      return t;
    }
    case NcExpr::Kind::Mul: {
      auto a = taylor_table(e->left, centre, order);
      auto b = taylor_table(e->right, centre, order);
      if (!a || !b) return std::nullopt;
      return detail::table_mul(*a, *b);
    }
    case NcExpr::Kind::Inv: {
      auto a = taylor_table(e->left, centre, order);
      if (!a) return std::nullopt;
      return detail::table_inv(*a);
    }
    case NcExpr::Kind::ScaleLeft: {
      auto a = taylor_table(e->left, centre, order);
      if (!a) return std::nullopt;
      K c = field_traits<K>::from_rational(e->value);
      for (auto& [w, vals] : a->coeff)
        for (auto& m : vals) m = m * c;
      return a;
    }
    case NcExpr::Kind::ScaleRight: {
      auto a = taylor_table(e->left, centre, order);
      if (!a) return std::nullopt;
      K c = field_traits<K>::from_rational(e->value);
      for (auto& [w, vals] : a->coeff)
        for (auto& m : vals) m = m * c;
      return a;
    }
  }
  return std::nullopt;
}

}  // namespace ncfm
