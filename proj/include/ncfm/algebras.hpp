#pragma once

#include <memory>

#include "ncfm/function_ops.hpp"
#include "ncfm/realization.hpp"
#include "ncfm/rng.hpp"

namespace ncfm {

// An r x c block of algebra elements (each element concretely an n x n
// matrix over K). Flattening places cell (i,j) at block position (i,j),
// i.e. the sum E_ij (x) a_ij.
template <typename K>
struct AlgBlock {
  int rows = 0, cols = 0;
  std::vector<Matrix<K>> cells;

  AlgBlock() = default;
  AlgBlock(int r, int c, const Matrix<K>& fill) : rows(r), cols(c), cells(static_cast<size_t>(r) * c, fill) {}
  Matrix<K>& at(int i, int j) { return cells[static_cast<size_t>(i) * cols + j]; }
  const Matrix<K>& at(int i, int j) const { return cells[static_cast<size_t>(i) * cols + j]; }
};

// Unital algebra interface. Elements are n x n matrices over K; concrete
// instances decide the product, the invert hook, and membership. flatten
// makes invertibility over A^{r x r} decidable by one exact rank test.
template <typename K>
class UnitalAlgebra {
 public:
  using Elem = Matrix<K>;
  virtual ~UnitalAlgebra() = default;

  virtual std::string name() const = 0;
  virtual int rep_size() const = 0;
  virtual Elem zero() const { return Elem(rep_size(), rep_size()); }
  virtual Elem one() const { return Elem::identity(rep_size()); }
  virtual Elem add(const Elem& a, const Elem& b) const { return a + b; }
  virtual Elem negate(const Elem& a) const { return -a; }
  virtual Elem mul(const Elem& a, const Elem& b) const = 0;
  virtual Elem scalar_mul(const K& c, const Elem& a) const { return a * c; }
  virtual bool equals(const Elem& a, const Elem& b) const { return a == b; }
  virtual bool contains(const Elem& a) const = 0;
  virtual std::optional<Elem> invert(const Elem& a) const = 0;
  virtual Matrix<K> flatten(const AlgBlock<K>& block) const {
    const int n = rep_size();
    Matrix<K> m(block.rows * n, block.cols * n);
    for (int i = 0; i < block.rows; ++i)
      for (int j = 0; j < block.cols; ++j) m.set_block(i * n, j * n, block.at(i, j));
    return m;
  }
  virtual bool is_stably_finite() const = 0;
  virtual Elem random_element(Rng& rng, long bound) const = 0;
};

// The full matrix algebra K^{n x n}.
template <typename K>
class MatrixAlg : public UnitalAlgebra<K> {
 public:
  explicit MatrixAlg(int n) : n_(n) {}
  std::string name() const override { return "matn:" + std::to_string(n_); }
  int rep_size() const override { return n_; }
  Matrix<K> mul(const Matrix<K>& a, const Matrix<K>& b) const override { return a * b; }
  bool contains(const Matrix<K>& a) const override { return a.rows() == n_ && a.cols() == n_; }
  std::optional<Matrix<K>> invert(const Matrix<K>& a) const override { return inverse(a); }
  bool is_stably_finite() const override { return true; }
  Matrix<K> random_element(Rng& rng, long bound) const override {
    return rng.integer_matrix<K>(n_, n_, bound);
  }

 private:
  int n_;
};

// Upper-triangular n x n matrices: closed under the operations, finite
// dimensional, hence stably finite; a matrix-inverse of an invertible
// upper-triangular matrix is upper triangular again.
template <typename K>
class UpperTriangularAlg : public UnitalAlgebra<K> {
 public:
  explicit UpperTriangularAlg(int n) : n_(n) {}
  std::string name() const override { return "ut:" + std::to_string(n_); }
  int rep_size() const override { return n_; }
  Matrix<K> mul(const Matrix<K>& a, const Matrix<K>& b) const override { return a * b; }
  bool contains(const Matrix<K>& a) const override {
    if (a.rows() != n_ || a.cols() != n_) return false;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < i; ++j)
        if (!field_traits<K>::is_zero(a(i, j))) return false;
    return true;
  }
  std::optional<Matrix<K>> invert(const Matrix<K>& a) const override {
    auto inv = inverse(a);
    if (inv && !contains(*inv)) throw std::logic_error("UT inverse left the algebra");
    return inv;
  }
  bool is_stably_finite() const override { return true; }
  Matrix<K> random_element(Rng& rng, long bound) const override {
    Matrix<K> m(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j)
        m(i, j) = field_traits<K>::from_rational(Rational(rng.integer(-bound, bound)));
    return m;
  }

 private:
  int n_;
};

// Block arithmetic over an algebra.
template <typename K>
AlgBlock<K> block_identity(const UnitalAlgebra<K>& alg, int r) {
  AlgBlock<K> b(r, r, alg.zero());
  for (int i = 0; i < r; ++i) b.at(i, i) = alg.one();
  return b;
}

template <typename K>
AlgBlock<K> block_add(const UnitalAlgebra<K>& alg, const AlgBlock<K>& a, const AlgBlock<K>& b) {
  AlgBlock<K> r(a.rows, a.cols, alg.zero());
  for (size_t t = 0; t < r.cells.size(); ++t) r.cells[t] = alg.add(a.cells[t], b.cells[t]);
  return r;
}

template <typename K>
AlgBlock<K> block_sub(const UnitalAlgebra<K>& alg, const AlgBlock<K>& a, const AlgBlock<K>& b) {
  AlgBlock<K> r(a.rows, a.cols, alg.zero());
  for (size_t t = 0; t < r.cells.size(); ++t) r.cells[t] = alg.add(a.cells[t], alg.negate(b.cells[t]));
  return r;
}

template <typename K>
AlgBlock<K> block_mul(const UnitalAlgebra<K>& alg, const AlgBlock<K>& a, const AlgBlock<K>& b) {
  if (a.cols != b.rows) throw std::invalid_argument("block_mul: shape mismatch");
  AlgBlock<K> r(a.rows, b.cols, alg.zero());
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k)
      for (int j = 0; j < b.cols; ++j)
        r.at(i, j) = alg.add(r.at(i, j), alg.mul(a.at(i, k), b.at(k, j)));
  return r;
}

template <typename K>
bool block_equal(const UnitalAlgebra<K>& alg, const AlgBlock<K>& a, const AlgBlock<K>& b) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  for (size_t t = 0; t < a.cells.size(); ++t)
    if (!alg.equals(a.cells[t], b.cells[t])) return false;
  return true;
}

// M (x) 1_A for a scalar matrix M.
template <typename K>
AlgBlock<K> block_from_scalar(const UnitalAlgebra<K>& alg, const Matrix<K>& m) {
  AlgBlock<K> b(m.rows(), m.cols(), alg.zero());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) b.at(i, j) = alg.scalar_mul(m(i, j), alg.one());
  return b;
}

// (A)T^A = sum_ij T(E_ij) (x) a_ij, assembled as a p x q block of elements.
template <typename K>
AlgBlock<K> apply_algebra(const UnitalAlgebra<K>& alg, const BlockLinearMap<K>& t,
                          const AlgBlock<K>& a) {
  if (a.rows != t.input_size() || a.cols != t.input_size())
    throw std::invalid_argument("apply_algebra: block must be s x s");
  AlgBlock<K> r(t.out_rows(), t.out_cols(), alg.zero());
  for (int i = 0; i < t.input_size(); ++i)
    for (int j = 0; j < t.input_size(); ++j) {
      const Matrix<K>& img = t.image(i, j);
      for (int p = 0; p < t.out_rows(); ++p)
        for (int q = 0; q < t.out_cols(); ++q) {
          if (field_traits<K>::is_zero(img(p, q))) continue;
          r.at(p, q) = alg.add(r.at(p, q), alg.scalar_mul(img(p, q), a.at(i, j)));
        }
    }
  return r;
}

// Inverse of an r x r block over A through the flattening; the inverse of
// an invertible element of a finite-dimensional subalgebra stays inside it.
template <typename K>
std::optional<AlgBlock<K>> block_invert(const UnitalAlgebra<K>& alg, const AlgBlock<K>& a) {
  if (a.rows != a.cols) throw std::invalid_argument("block_invert: square block required");
  auto inv = inverse(alg.flatten(a));
  if (!inv) return std::nullopt;
  const int n = alg.rep_size();
  AlgBlock<K> r(a.rows, a.cols, alg.zero());
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) r.at(i, j) = inv->block(i * n, j * n, n, n);
  return r;
}

// Case-wise evaluation of an expression over a unital algebra; empty
// optional when some inverse does not exist in A.
template <typename K>
std::optional<Matrix<K>> eval_algebra(const UnitalAlgebra<K>& alg, const ExprPtr& e,
                                      const std::vector<Matrix<K>>& a) {
  switch (e->kind) {
    case NcExpr::Kind::Const:
      return alg.scalar_mul(field_traits<K>::from_rational(e->value), alg.one());
    case NcExpr::Kind::Var:
      return a.at(e->var);
    case NcExpr::Kind::Add: {
      auto l = eval_algebra(alg, e->left, a), r = eval_algebra(alg, e->right, a);
      if (!l || !r) return std::nullopt;
      return alg.add(*l, *r);
    }
    case NcExpr::Kind::Mul: {
      auto l = eval_algebra(alg, e->left, a), r = eval_algebra(alg, e->right, a);
      if (!l || !r) return std::nullopt;
      return alg.mul(*l, *r);
    }
    case NcExpr::Kind::Inv: {
      auto l = eval_algebra(alg, e->left, a);
      if (!l) return std::nullopt;
      return alg.invert(*l);
    }
    case NcExpr::Kind::ScaleLeft:
    case NcExpr::Kind::ScaleRight: {
      auto l = eval_algebra(alg, e->left, a);
      if (!l) return std::nullopt;
      return alg.scalar_mul(field_traits<K>::from_rational(e->value), *l);
    }
  }
  return std::nullopt;
}

template <typename K>
bool in_algebra_domain(const UnitalAlgebra<K>& alg, const ExprPtr& e,
                       const std::vector<Matrix<K>>& a) {
  return eval_algebra(alg, e, a).has_value();
}

// The pencil I_L (x) 1 - sum_k [(A_k) applied to X_k - A_k(Y_k) (x) 1] of a
// realization over A, as an L x L block.
template <typename K>
AlgBlock<K> algebra_pencil(const UnitalAlgebra<K>& alg, const FMRealization<K>& r,
                           const std::vector<AlgBlock<K>>& x) {
  AlgBlock<K> lam = block_identity(alg, r.L);
  for (int k = 0; k < r.d; ++k) {
    AlgBlock<K> term = apply_algebra(alg, r.A[k], x[k]);
    term = block_sub(alg, term, block_from_scalar(alg, r.A[k].apply(r.centre[k])));
    lam = block_sub(alg, lam, term);
  }
  return lam;
}

template <typename K>
bool dom_algebra_contains(const UnitalAlgebra<K>& alg, const FMRealization<K>& r,
                          const std::vector<AlgBlock<K>>& x) {
  return is_invertible(alg.flatten(algebra_pencil(alg, r, x)));
}

// R^A evaluation at a d-tuple of s x s blocks over A.
template <typename K>
std::optional<AlgBlock<K>> evaluate_algebra(const UnitalAlgebra<K>& alg, const FMRealization<K>& r,
                                            const std::vector<AlgBlock<K>>& x) {
  auto pencil_inv = block_invert(alg, algebra_pencil(alg, r, x));
  if (!pencil_inv) return std::nullopt;
  AlgBlock<K> rhs(r.L, r.out_cols(), alg.zero());
  for (int k = 0; k < r.d; ++k) {
    AlgBlock<K> term = apply_algebra(alg, r.B[k], x[k]);
    term = block_sub(alg, term, block_from_scalar(alg, r.B[k].apply(r.centre[k])));
    rhs = block_add(alg, rhs, term);
  }
  AlgBlock<K> value = block_mul(alg, block_from_scalar(alg, r.C), block_mul(alg, *pencil_inv, rhs));
  return block_add(alg, block_from_scalar(alg, r.D), value);
}

// I_s (x) a for a d-tuple of elements.
template <typename K>
std::vector<AlgBlock<K>> tensor_with_identity(const UnitalAlgebra<K>& alg, int s,
                                              const std::vector<Matrix<K>>& a) {
  std::vector<AlgBlock<K>> out;
  for (const auto& ak : a) {
    AlgBlock<K> b(s, s, alg.zero());
    for (int i = 0; i < s; ++i) b.at(i, i) = ak;
    out.push_back(b);
  }
  return out;
}

// Matrix-algebra consistency for A_n = K^{n x n}: membership and evaluation
// agree with the sn-level evaluation after the shuffle conjugation
//   X in DOM^{A_n}(R)  <=>  P1 X P1^{-1} in DOM_{sn}(R),
//   R^{A_n}(X) = P1^{-1} R(P1 X P1^{-1}) P1,  with P1 = E(n, s).
template <typename K>
bool matrix_algebra_bridge(const FMRealization<K>& r, const std::vector<AlgBlock<K>>& x, int n) {
  MatrixAlg<K> alg(n);
  Matrix<K> p1 = shuffle_matrix<K>(n, r.s);
  Matrix<K> p1t = p1.transpose();
  std::vector<Matrix<K>> conj;
  for (const auto& xk : x) conj.push_back(p1 * alg.flatten(xk) * p1t);

  bool dom_a = dom_algebra_contains(alg, r, x);
  bool dom_m = r.dom_contains(conj);
  if (dom_a != dom_m) return false;
  if (!dom_a) return true;
  auto val_a = evaluate_algebra(alg, r, x);
  auto val_m = r.evaluate(conj);
  return alg.flatten(*val_a) == p1t * (*val_m) * p1;
}

// Randomized check of stable finiteness: builds A B = I (x) 1 from
// elementary and diagonal factors whose inverses come from the algebra's
// own invert hook, then demands B A = I (x) 1; also runs the triangular
// characterization (an invertible upper-triangular block forces invertible
// diagonal blocks). A probe, not a proof.
template <typename K>
bool stably_finite_probe(const UnitalAlgebra<K>& alg, int m, int trials, Rng& rng) {
  AlgBlock<K> id = block_identity(alg, m);
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<AlgBlock<K>> factors, inverses;
    int nf = 2 + static_cast<int>(rng.integer(0, 1));
    for (int f = 0; f < nf; ++f) {
      if (m > 1 && rng.integer(0, 1) == 0) {
        int p = static_cast<int>(rng.integer(0, m - 1));
        int q = static_cast<int>(rng.integer(0, m - 2));
        if (q >= p) ++q;
        typename UnitalAlgebra<K>::Elem e = alg.random_element(rng, 2);
        AlgBlock<K> fac = id, inv = id;
        fac.at(p, q) = e;
        inv.at(p, q) = alg.negate(e);
        factors.push_back(fac);
        inverses.insert(inverses.begin(), inv);
      } else {
        AlgBlock<K> fac = id, inv = id;
        for (int i = 0; i < m; ++i) {
          while (true) {
            typename UnitalAlgebra<K>::Elem a = alg.random_element(rng, 2);
            auto b = alg.invert(a);
            if (!b) continue;
            if (!alg.equals(alg.mul(a, *b), alg.one())) return false;  // invert hook is broken
            fac.at(i, i) = a;
            inv.at(i, i) = *b;
            break;
          }
        }
        factors.push_back(fac);
        inverses.insert(inverses.begin(), inv);
      }
    }
    AlgBlock<K> big_a = id, big_b = id;
    for (const auto& f : factors) big_a = block_mul(alg, big_a, f);
    for (const auto& g : inverses) big_b = block_mul(alg, big_b, g);
    if (!block_equal(alg, block_mul(alg, big_a, big_b), id)) return false;
    if (!block_equal(alg, block_mul(alg, big_b, big_a), id)) return false;
  }
  // triangular characterization
  for (int trial = 0; trial < trials; ++trial) {
    AlgBlock<K> t(m, m, alg.zero());
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) t.at(i, j) = alg.random_element(rng, 2);
    if (!is_invertible(alg.flatten(t))) continue;
    for (int i = 0; i < m; ++i) {
      AlgBlock<K> cell(1, 1, t.at(i, i));
      if (!is_invertible(alg.flatten(cell))) return false;
    }
  }
  return true;
}

struct CohnReport {
  int samples = 0;
  int common_domain_hits = 0;
  bool direct_agree = true;
  bool realization_identity_holds = true;
};

// Cohn's theorem harness: for verified-equivalent expressions and a stably
// finite algebra, every sampled point of the common A-domain must give equal
// direct evaluations, and both minimal realizations must reproduce them via
// I_s (x) e^A(a) = R^A(I_s (x) a). Throws if the expressions are not
// verified equivalent first.
template <typename K>
CohnReport cohn_check(const UnitalAlgebra<K>& alg, const ExprPtr& e1, const ExprPtr& e2, int d,
                      int samples, std::uint64_t seed, const EquivalenceOptions& eopt = {}) {
  auto verdict = equivalent<K>(e1, e2, d, eopt);
  if (verdict.status != Equivalence::Equivalent)
    throw std::invalid_argument("cohn_check: expressions are not verified equivalent");
  auto r1 = minimal_realization(e1, verdict.centre);
  auto r2 = minimal_realization(e2, verdict.centre);

  CohnReport report;
  report.samples = samples;
  Rng rng(seed);
  for (int t = 0; t < samples; ++t) {
    std::vector<Matrix<K>> a;
    for (int k = 0; k < d; ++k) a.push_back(alg.random_element(rng, 3));
    auto v1 = eval_algebra(alg, e1, a);
    auto v2 = eval_algebra(alg, e2, a);
    if (!v1 || !v2) continue;
    ++report.common_domain_hits;
    if (!alg.equals(*v1, *v2)) report.direct_agree = false;
    for (const auto* r : {&*r1, &*r2}) {
      auto lifted = tensor_with_identity(alg, r->s, a);
      auto via = evaluate_algebra(alg, *r, lifted);
      if (!via) {
        report.realization_identity_holds = false;
        continue;
      }
      AlgBlock<K> expected(r->s, r->s, alg.zero());
      for (int i = 0; i < r->s; ++i) expected.at(i, i) = *v1;
      if (!block_equal(alg, *via, expected)) report.realization_identity_holds = false;
    }
  }
  return report;
}

}  // namespace ncfm
