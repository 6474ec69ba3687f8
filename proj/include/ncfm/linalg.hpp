#pragma once

#include <optional>
#include <vector>

#include "ncfm/matrix.hpp"

namespace ncfm {

namespace detail {

// Row echelon reduction in place; returns pivot columns. Exact fields pivot
// on the first nonzero entry, floats on the largest entry with the global
// 1e-9 relative threshold.
template <typename K>
std::vector<int> row_reduce(Matrix<K>& m, bool reduced) {
  const int rows = m.rows(), cols = m.cols();
  double tol = 0.0;
  if constexpr (!field_traits<K>::is_exact) tol = kFloatTol * std::max(1.0, m.max_abs_score());
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    double best = tol;
    for (int i = r; i < rows; ++i) {
      double score = field_traits<K>::abs_score(m(i, c));
      if constexpr (field_traits<K>::is_exact) {
        if (score > 0.0) {
          piv = i;
          break;
        }
      } else {
        if (score > best) {
          best = score;
          piv = i;
        }
      }
    }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < cols; ++j) std::swap(m(r, j), m(piv, j));
    K inv_p = field_traits<K>::one() / m(r, c);
    for (int j = c; j < cols; ++j) m(r, j) = m(r, j) * inv_p;
    int start = reduced ? 0 : r + 1;
    for (int i = start; i < rows; ++i) {
      if (i == r) continue;
      K f = m(i, c);
      if (field_traits<K>::is_zero(f)) continue;
      for (int j = c; j < cols; ++j) m(i, j) = m(i, j) - f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

// Rank of an exact matrix via fraction-free (Bareiss) elimination on the
// denominator-cleared integer matrix.
inline int rank(const Matrix<Rational>& a) {
  const int rows = a.rows(), cols = a.cols();
  if (rows == 0 || cols == 0) return 0;
  std::vector<std::vector<mpz_class>> m(rows, std::vector<mpz_class>(cols));
  for (int i = 0; i < rows; ++i) {
    mpz_class lcm = 1;
    for (int j = 0; j < cols; ++j) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), a(i, j).get_den().get_mpz_t());
    for (int j = 0; j < cols; ++j) m[i][j] = a(i, j).get_num() * (lcm / a(i, j).get_den());
  }
  mpz_class prev = 1;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) m[r].swap(m[piv]);
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j) {
        m[i][j] = m[r][c] * m[i][j] - m[i][c] * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

template <typename K>
int rank(const Matrix<K>& a) {
  Matrix<K> m = a;
  return static_cast<int>(detail::row_reduce(m, /*reduced=*/false).size());
}

template <typename K>
bool is_invertible(const Matrix<K>& a) {
  if (a.rows() != a.cols()) return false;
  return rank(a) == a.rows();
}

// Determinant by elimination (product of pivots, swap-signed).
template <typename K>
K determinant(const Matrix<K>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant: square matrix required");
  const int n = a.rows();
  Matrix<K> m = a;
  K det = field_traits<K>::one();
  double tol = 0.0;
  if constexpr (!field_traits<K>::is_exact) tol = kFloatTol * std::max(1.0, m.max_abs_score());
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    double best = tol;
    for (int i = c; i < n; ++i) {
      double score = field_traits<K>::abs_score(m(i, c));
      if constexpr (field_traits<K>::is_exact) {
        if (score > 0.0) {
          piv = i;
          break;
        }
      } else if (score > best) {
        best = score;
        piv = i;
      }
    }
    if (piv < 0) return field_traits<K>::zero();
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m(c, j), m(piv, j));
      det = -det;
    }
    det = det * m(c, c);
    K inv_p = field_traits<K>::one() / m(c, c);
    for (int i = c + 1; i < n; ++i) {
      K f = m(i, c) * inv_p;
      if (field_traits<K>::is_zero(f)) continue;
      for (int j = c; j < n; ++j) m(i, j) = m(i, j) - f * m(c, j);
    }
  }
  return det;
}

template <typename K>
struct SolveResult {
  bool singular = false;
  Matrix<K> x;
};

// Solves A X = B. Exact fields solve exactly; floats report singular when a
// pivot falls below the relative threshold.
template <typename K>
SolveResult<K> solve(const Matrix<K>& a, const Matrix<K>& b) {
  if (a.rows() != a.cols()) throw std::invalid_argument("solve: A must be square");
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: dimension mismatch");
  const int n = a.rows();
  Matrix<K> aug = hstack(a, b);
  std::vector<int> pivots = detail::row_reduce(aug, /*reduced=*/true);
  // only pivots inside the A block certify invertibility
  int rank_a = 0;
  for (int c : pivots)
    if (c < n) ++rank_a;
  if (rank_a < n) return {true, Matrix<K>()};
  return {false, aug.block(0, n, n, b.cols())};
}

template <typename K>
std::optional<Matrix<K>> inverse(const Matrix<K>& a) {
  SolveResult<K> r = solve(a, Matrix<K>::identity(a.rows()));
  if (r.singular) return std::nullopt;
  return r.x;
}

// Basis (as columns) of {v : Av = 0}; dimension = cols - rank.
template <typename K>
Matrix<K> kernel_basis_matrix(const Matrix<K>& a) {
  const int n = a.cols();
  Matrix<K> m = a;
  std::vector<int> pivots = detail::row_reduce(m, /*reduced=*/true);
  std::vector<bool> is_pivot(n, false);
  for (int c : pivots) is_pivot[c] = true;
  Matrix<K> basis(n, n - static_cast<int>(pivots.size()));
  int col = 0;
  for (int free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    basis(free, col) = field_traits<K>::one();
    for (size_t r = 0; r < pivots.size(); ++r) basis(pivots[r], col) = -m(static_cast<int>(r), free);
    ++col;
  }
  return basis;
}

template <typename K>
Rational exact_only_guard();

// Column span with exact membership semantics: two subspaces are equal iff
// each basis lies in the span of the other.
template <typename K>
class Subspace {
 public:
  Subspace() : ambient_(0) {}
  explicit Subspace(int ambient_dim) : ambient_(ambient_dim), basis_(ambient_dim, 0) {}
  // Keeps an independent subset of the given generating columns.
  static Subspace span_of(const Matrix<K>& generators) {
    Subspace s(generators.rows());
    s.extend_with(generators);
    return s;
  }
  static Subspace full(int ambient_dim) { return span_of(Matrix<K>::identity(ambient_dim)); }

  int ambient_dim() const { return ambient_; }
  int dim() const { return basis_.cols(); }
  const Matrix<K>& basis() const { return basis_; }

  bool contains(const Matrix<K>& v) const {
    if (v.rows() != ambient_) throw std::invalid_argument("Subspace::contains: ambient mismatch");
    return rank(hstack(basis_, v)) == dim();
  }
  bool contains(const Subspace& o) const { return o.dim() == 0 || rank(hstack(basis_, o.basis_)) == dim(); }
  bool operator==(const Subspace& o) const {
    return ambient_ == o.ambient_ && dim() == o.dim() && contains(o);
  }
  bool operator!=(const Subspace& o) const { return !(*this == o); }

  // Adds generator columns, keeping the basis independent. Returns true if
  // the dimension grew.
  bool extend_with(const Matrix<K>& generators) {
    if (generators.rows() != ambient_) throw std::invalid_argument("Subspace::extend_with: ambient mismatch");
    bool grew = false;
    for (int j = 0; j < generators.cols(); ++j) {
      Matrix<K> v = generators.col(j);
      if (v.is_zero()) continue;
      if (dim() == 0 || rank(hstack(basis_, v)) > dim()) {
        basis_ = hstack(basis_, v);
        grew = true;
      }
    }
    return grew;
  }

 private:
  int ambient_;
  Matrix<K> basis_;
};

template <typename K>
Subspace<K> column_space(const Matrix<K>& a) {
  return Subspace<K>::span_of(a);
}

template <typename K>
Subspace<K> kernel_basis(const Matrix<K>& a) {
  return Subspace<K>::span_of(kernel_basis_matrix(a));
}

template <typename K>
Subspace<K> sum_subspaces(const Subspace<K>& u, const Subspace<K>& v) {
  if (u.ambient_dim() != v.ambient_dim()) throw std::invalid_argument("sum_subspaces: ambient mismatch");
  Subspace<K> s = u;
  s.extend_with(v.basis());
  return s;
}

// Intersection via the kernel of the stacked bases [U | -V].
template <typename K>
Subspace<K> intersect_subspaces(const Subspace<K>& u, const Subspace<K>& v) {
  if (u.ambient_dim() != v.ambient_dim())
    throw std::invalid_argument("intersect_subspaces: ambient mismatch");
  if (u.dim() == 0 || v.dim() == 0) return Subspace<K>(u.ambient_dim());
  Matrix<K> stacked = hstack(u.basis(), -v.basis());
  Matrix<K> ker = kernel_basis_matrix(stacked);
  Matrix<K> coeff_u = ker.block(0, 0, u.dim(), ker.cols());
  return Subspace<K>::span_of(u.basis() * coeff_u);
}

// {v : Av in V}, via the kernel of [A | -basis(V)] projected to the first block.
template <typename K>
Subspace<K> preimage_subspace(const Matrix<K>& a, const Subspace<K>& v) {
  if (a.rows() != v.ambient_dim()) throw std::invalid_argument("preimage_subspace: ambient mismatch");
  if (v.dim() == 0) return kernel_basis(a);
  Matrix<K> stacked = hstack(a, -v.basis());
  Matrix<K> ker = kernel_basis_matrix(stacked);
  Matrix<K> coeff_a = ker.block(0, 0, a.cols(), ker.cols());
  return Subspace<K>::span_of(coeff_a);
}

// The permutation matrix E(n1,n2) that reorders Kronecker factors:
//   P (x) Q = E(n1,n3) (Q (x) P) E(n2,n4)^T  for P in K^{n1 x n2}, Q in K^{n3 x n4},
// equivalently E(a,b) (sum E_ij (x) M_ij) E(a,b)^T = sum M_ij (x) E_ij for
// E_ij in K^{b x b}, M_ij in K^{a x a}. Satisfies
// E(n1,n2)^{-1} = E(n1,n2)^T = E(n2,n1).
template <typename K>
Matrix<K> shuffle_matrix(int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("shuffle_matrix: sizes must be >= 1");
  Matrix<K> e(n1 * n2, n1 * n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) e(i * n2 + j, j * n1 + i) = field_traits<K>::one();
  return e;
}

}  // namespace ncfm
