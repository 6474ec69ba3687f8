#pragma once

#include <functional>
#include <vector>

#include "ncfm/linmap.hpp"

namespace ncfm {

// An m x m block matrix whose entries are degree-`deg` tensors over K^{s x s},
// stored concretely as s^deg x s^deg Kronecker matrices. Degree 1 is an
// ordinary sm x sm matrix viewed blockwise.
template <typename K>
struct FauxValue {
  int s = 0;
  int m = 0;
  int deg = 0;
  Matrix<K> big;  // (m * s^deg) square, block (i,j) of size s^deg

  int cell() const {
    int c = 1;
    for (int t = 0; t < deg; ++t) c *= s;
    return c;
  }
  Matrix<K> entry(int i, int j) const { return big.block(i * cell(), j * cell(), cell(), cell()); }
  bool is_zero() const { return big.is_zero(); }

  static FauxValue lift(const Matrix<K>& x, int s) {
    if (x.rows() != x.cols() || x.rows() % s != 0)
      throw std::invalid_argument("FauxValue::lift: size must be a square multiple of s");
    return {s, x.rows() / s, 1, x};
  }

  // Applies a multilinear map, given by its values on basis tuples from
  // E_s^deg, to every tensor entry: result block (i,j) = sum over basis
  // tuples of coefficient * map(tuple).
  Matrix<K> pair_with(const std::function<Matrix<K>(const BasisTuple&)>& map_on_basis, int out_rows,
                      int out_cols) const {
    Matrix<K> out(m * out_rows, m * out_cols);
    const int c = cell();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Matrix<K> t = entry(i, j);
        Matrix<K> acc(out_rows, out_cols);
        for (const BasisTuple& bt : basis_tuples(s, deg)) {
          // Tensor basis element E_{i1 j1} x ... x E_{il jl} corresponds to
          // the single Kronecker entry at (sum i_t s^(l-1-t), sum j_t ...).
          int r = 0, cc = 0;
          for (int v : bt) {
            r = r * s + v / s;
            cc = cc * s + v % s;
          }
          (void)c;
          const K& coeff = t(r, cc);
          if (field_traits<K>::is_zero(coeff)) continue;
          acc += map_on_basis(bt) * coeff;
        }
        out.set_block(i * out_rows, j * out_cols, acc);
      }
    return out;
  }
};

// P (.)_s Q with entry (i,j) = sum_k P_ik (x) Q_kj, the tensor product of
// blocks tracked by degree.
template <typename K>
FauxValue<K> faux_product(const FauxValue<K>& p, const FauxValue<K>& q) {
  if (p.s != q.s || p.m != q.m) throw std::invalid_argument("faux_product: block structure mismatch");
  FauxValue<K> r{p.s, p.m, p.deg + q.deg, Matrix<K>()};
  const int pc = p.cell(), qc = q.cell(), rc = pc * qc;
  r.big = Matrix<K>(p.m * rc, p.m * rc);
  for (int i = 0; i < p.m; ++i)
    for (int j = 0; j < p.m; ++j) {
      Matrix<K> acc(rc, rc);
      for (int k = 0; k < p.m; ++k) acc += kron(p.entry(i, k), q.entry(k, j));
      r.big.set_block(i * rc, j * rc, acc);
    }
  return r;
}

template <typename K>
FauxValue<K> faux_product(const Matrix<K>& p, const Matrix<K>& q, int s) {
  return faux_product(FauxValue<K>::lift(p, s), FauxValue<K>::lift(q, s));
}

// X^{(.)_s w} = X_{i_1} (.)_s ... (.)_s X_{i_l} for a nonempty word w.
template <typename K>
FauxValue<K> word_faux_power(const std::vector<Matrix<K>>& x, const Word& w, int s) {
  if (w.empty()) throw std::invalid_argument("word_faux_power: word must be nonempty");
  FauxValue<K> r = FauxValue<K>::lift(x.at(w[0]), s);
  for (size_t t = 1; t < w.size(); ++t) r = faux_product(r, FauxValue<K>::lift(x.at(w[t]), s));
  return r;
}

// True iff every faux word of length kappa = m*s vanishes. Checked degree by
// degree: once every word of some degree vanishes, all longer words do too.
template <typename K>
bool is_jointly_nilpotent(const std::vector<Matrix<K>>& z, int s) {
  if (z.empty()) return true;
  const int size = z[0].rows();
  for (const auto& zk : z)
    if (zk.rows() != size || zk.cols() != size)
      throw std::invalid_argument("is_jointly_nilpotent: size mismatch");
  if (size % s != 0) throw std::invalid_argument("is_jointly_nilpotent: s must divide size");
  const int m = size / s;
  const int kappa = m * s;
  const int d = static_cast<int>(z.size());

  std::vector<FauxValue<K>> level;
  for (int k = 0; k < d; ++k) level.push_back(FauxValue<K>::lift(z[k], s));
  for (int deg = 1; deg <= kappa; ++deg) {
    bool all_zero = true;
    for (const auto& v : level)
      if (!v.is_zero()) {
        all_zero = false;
        break;
      }
    if (all_zero) return true;
    if (deg == kappa) return false;
    std::vector<FauxValue<K>> next;
    next.reserve(level.size() * d);
    for (const auto& v : level)
      for (int k = 0; k < d; ++k) next.push_back(faux_product(v, FauxValue<K>::lift(z[k], s)));
    level = std::move(next);
  }
  return false;
}

}  // namespace ncfm
