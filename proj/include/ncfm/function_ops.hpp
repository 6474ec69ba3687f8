#pragma once

#include "ncfm/reduction.hpp"
#include "ncfm/rng.hpp"
#include "ncfm/taylor.hpp"

namespace ncfm {

// Minimal realization of an expression at a centre: synthesize then reduce.
// Empty optional iff the centre is outside the expression's domain.
template <typename K>
std::optional<FMRealization<K>> minimal_realization(const ExprPtr& e,
                                                    const std::vector<Matrix<K>>& centre) {
  auto synth = synthesize(e, centre);
  if (!synth) return std::nullopt;
  return kalman_reduce(*synth).first;
}

// State dimension of the minimal realization divided by the centre size.
// The divisibility s | L is a theorem; its failure is an internal error.
template <typename K>
int mcmillan_degree(const ExprPtr& e, const std::vector<Matrix<K>>& centre) {
  auto r = minimal_realization(e, centre);
  if (!r) throw std::invalid_argument("mcmillan_degree: centre not in domain");
  if (r->L % r->s != 0) throw std::logic_error("mcmillan_degree: s does not divide L");
  return r->L / r->s;
}

struct CommonCentreOptions {
  std::vector<int> sizes{1, 2, 3, 4};
  std::uint64_t seed = 0;
  int budget = 64;  // sampling attempts per size
  long bound = 3;
};

template <typename K>
struct CommonCentre {
  int n = 0;
  std::vector<Matrix<K>> point;
};

// Random search for a point in dom_n(e1) ∩ dom_n(e2), trying each size in
// the schedule in order. Failure does not certify the intersection is empty.
template <typename K>
std::optional<CommonCentre<K>> find_common_centre(const ExprPtr& e1, const ExprPtr& e2, int d,
                                                  const CommonCentreOptions& opt) {
  Rng rng(opt.seed);
  for (int n : opt.sizes) {
    for (int t = 0; t < opt.budget; ++t) {
      std::vector<Matrix<K>> x = rng.integer_tuple<K>(d, n, opt.bound);
      if (in_domain(e1, x) && in_domain(e2, x)) return CommonCentre<K>{n, x};
    }
  }
  return std::nullopt;
}

enum class Equivalence { Equivalent, NotEquivalent, Inconclusive };

// Mismatch of minimal-realization data at the common centre; the Taylor
// uniqueness theorem turns any such mismatch into a certificate of
// non-equivalence.
struct TaylorMismatch {
  std::string what;  // "state dimension" or "constant term"
  int L1 = 0, L2 = 0;
};

template <typename K>
struct EquivalenceVerdict {
  Equivalence status = Equivalence::Inconclusive;
  int centre_size = 0;
  std::vector<Matrix<K>> centre;
  Matrix<K> similarity;  // verified T, when equivalent
  std::optional<TaylorMismatch> mismatch;
  // A point where both expressions are defined with different values, when
  // the budgeted search finds one.
  std::optional<std::vector<Matrix<K>>> separating_point;
  std::string detail;
};

struct EquivalenceOptions {
  CommonCentreOptions centre;
  int separation_budget = 200;
};

template <typename K>
std::optional<std::vector<Matrix<K>>> find_separating_point(const ExprPtr& e1, const ExprPtr& e2,
                                                            int d, const CommonCentreOptions& base,
                                                            int budget) {
  Rng rng(base.seed + 0x5eed);
  for (int t = 0; t < budget; ++t) {
    int n = base.sizes[t % base.sizes.size()];
    std::vector<Matrix<K>> x = rng.integer_tuple<K>(d, n, base.bound);
    auto v1 = eval_matrices(e1, x);
    auto v2 = eval_matrices(e2, x);
    if (v1 && v2 && *v1 != *v2) return x;
  }
  return std::nullopt;
}

// Equivalence decision: find a common centre, build minimal realizations
// there, and compare them. Equal L and D feed the similarity solver, whose
// verified T certifies equivalence; any mismatch or verification failure
// certifies non-equivalence. Centre-search exhaustion is reported as
// Inconclusive, distinct from a false verdict.
template <typename K>
EquivalenceVerdict<K> equivalent(const ExprPtr& e1, const ExprPtr& e2, int d,
                                 const EquivalenceOptions& opt = {}) {
  EquivalenceVerdict<K> verdict;
  auto centre = find_common_centre<K>(e1, e2, d, opt.centre);
  if (!centre) {
    verdict.detail = "no common centre found within budget";
    return verdict;
  }
  verdict.centre_size = centre->n;
  verdict.centre = centre->point;

  auto r1 = minimal_realization(e1, centre->point);
  auto r2 = minimal_realization(e2, centre->point);
  if (!r1 || !r2) throw std::logic_error("equivalent: centre unexpectedly left the domain");

  auto fail = [&](TaylorMismatch mm, const std::string& why) {
    verdict.status = Equivalence::NotEquivalent;
    verdict.mismatch = std::move(mm);
    verdict.detail = why;
    verdict.separating_point =
        find_separating_point<K>(e1, e2, d, opt.centre, opt.separation_budget);
  };

  if (r1->L != r2->L) {
    fail({"state dimension", r1->L, r2->L}, "minimal state dimensions differ");
    return verdict;
  }
  if (r1->D != r2->D) {
    fail({"constant term", r1->L, r2->L}, "values at the common centre differ");
    return verdict;
  }
  SimilarityResult<K> sim = similarity_between(*r1, *r2);
  if (sim.status == SimilarityStatus::Similar) {
    verdict.status = Equivalence::Equivalent;
    verdict.similarity = sim.T;
    return verdict;
  }
  fail({"taylor coefficients", r1->L, r2->L}, "similarity verification failed: " + sim.reason);
  return verdict;
}

// Recentring of a realization at another point of its s-level domain,
// keeping the state dimension. T1 = I - sum A_k(Y'_k - Y_k) must be
// invertible, which is exactly Y' in DOM_s.
template <typename K>
std::optional<FMRealization<K>> shift_centre(const FMRealization<K>& r,
                                             const std::vector<Matrix<K>>& new_centre) {
  if (static_cast<int>(new_centre.size()) != r.d) throw std::invalid_argument("shift_centre: arity");
  Matrix<K> t1 = Matrix<K>::identity(r.L);
  for (int k = 0; k < r.d; ++k) t1 -= r.A[k].apply(new_centre[k] - r.centre[k]);
  auto t1_inv = inverse(t1);
  if (!t1_inv) return std::nullopt;
  Matrix<K> t2(r.L, r.out_cols());
  for (int k = 0; k < r.d; ++k) t2 += r.B[k].apply(r.centre[k] - new_centre[k]);
  Matrix<K> t12 = (*t1_inv) * t2;

  FMRealization<K> out;
  out.d = r.d;
  out.s = r.s;
  out.centre = new_centre;
  out.L = r.L;
  out.D = r.D - r.C * t12;
  out.C = r.C * (*t1_inv);
  for (int k = 0; k < r.d; ++k) {
    out.A.push_back(compose_const_right(r.A[k], *t1_inv));
    out.B.push_back(r.B[k] - compose_const_right(r.A[k], t12));
  }
  return out;
}

// Inflation to the centre I_n (x) Y: state Ln, D and C tensored, and the
// maps acting blockwise on sn x sn inputs.
template <typename K>
FMRealization<K> inflate_centre(const FMRealization<K>& r, int n) {
  if (n < 1) throw std::invalid_argument("inflate_centre: n must be >= 1");
  FMRealization<K> out;
  out.d = r.d;
  out.s = r.s * n;
  Matrix<K> in = Matrix<K>::identity(n);
  for (const auto& y : r.centre) out.centre.push_back(kron(in, y));
  out.L = r.L * n;
  out.D = kron(in, r.D);
  out.C = kron(in, r.C);
  for (int k = 0; k < r.d; ++k) {
    BlockLinearMap<K> ak(out.s, out.L, out.L), bk(out.s, out.L, out.D.cols());
    for (int i = 0; i < out.s; ++i)
      for (int j = 0; j < out.s; ++j) {
        ak.image(i, j) = r.A[k].apply_blocks(Matrix<K>::unit(out.s, out.s, i, j));
        bk.image(i, j) = r.B[k].apply_blocks(Matrix<K>::unit(out.s, out.s, i, j));
      }
    out.A.push_back(ak);
    out.B.push_back(bk);
  }
  return out;
}

// Evaluation of the underlying nc rational function at a point of any size
// n through a minimal realization centred at an s x s point. When s | n the
// realization evaluates directly; otherwise R(I_s (x) Z) = I_s (x) F and F
// is extracted after verifying the block-scalar structure.
template <typename K>
struct AnySizeEval {
  bool in_dom = false;
  Matrix<K> value;
};

template <typename K>
AnySizeEval<K> eval_function_any_size(const FMRealization<K>& r, const std::vector<Matrix<K>>& z) {
  const int n = z.at(0).rows();
  AnySizeEval<K> out;
  if (n % r.s == 0) {
    auto v = r.evaluate(z);
    if (!v) return out;
    out.in_dom = true;
    out.value = *v;
    return out;
  }
  Matrix<K> is = Matrix<K>::identity(r.s);
  std::vector<Matrix<K>> lifted;
  for (const auto& zk : z) lifted.push_back(kron(is, zk));
  auto v = r.evaluate(lifted);
  if (!v) return out;
  Matrix<K> f = v->block(0, 0, n, n);
  for (int bi = 0; bi < r.s; ++bi)
    for (int bj = 0; bj < r.s; ++bj) {
      Matrix<K> blk = v->block(bi * n, bj * n, n, n);
      if (bi == bj ? (blk != f) : !blk.is_zero())
        throw std::logic_error("eval_function_any_size: result is not I_s (x) F");
    }
  out.in_dom = true;
  out.value = f;
  return out;
}

// Realization of a matrix of scalar-valued realizations sharing one centre,
// assembled with shuffle corrections so the result respects direct sums,
// then Kalman-reduced since the raw assembly need not be minimal.
// Evaluations satisfy R(X) = E(sm,alpha) [R_ij(X)] E(sm,beta)^T.
template <typename K>
FMRealization<K> assemble_matrix_valued(const std::vector<std::vector<FMRealization<K>>>& parts,
                                        const std::vector<Matrix<K>>& centre) {
  const int alpha = static_cast<int>(parts.size());
  const int beta = static_cast<int>(parts.at(0).size());
  const int d = static_cast<int>(centre.size());
  const int s = centre[0].rows();
  int total_L = 0;
  for (const auto& row : parts) {
    if (static_cast<int>(row.size()) != beta)
      throw std::invalid_argument("assemble_matrix_valued: ragged grid");
    for (const auto& p : row) total_L += p.L;
  }

  Matrix<K> e_alpha = shuffle_matrix<K>(s, alpha);
  Matrix<K> e_beta_t = shuffle_matrix<K>(s, beta).transpose();

  Matrix<K> d_grid(alpha * s, beta * s);
  Matrix<K> c_grid(alpha * s, total_L);
  int col0 = 0;
  for (int i = 0; i < alpha; ++i)
    for (int j = 0; j < beta; ++j) {
      d_grid.set_block(i * s, j * s, parts[i][j].D);
      c_grid.set_block(i * s, col0, parts[i][j].C);
      col0 += parts[i][j].L;
    }

  FMRealization<K> out;
  out.d = d;
  out.s = s;
  out.centre = centre;
  out.L = total_L;
  out.D = e_alpha * d_grid * e_beta_t;
  out.C = e_alpha * c_grid;
  for (int k = 0; k < d; ++k) {
    BlockLinearMap<K> ak(s, total_L, total_L), bk(s, total_L, beta * s);
    for (int cell = 0; cell < s * s; ++cell) {
      Matrix<K> a_img(total_L, total_L), b_img(total_L, beta * s);
      int at = 0;
      for (int i = 0; i < alpha; ++i)
        for (int j = 0; j < beta; ++j) {
          const FMRealization<K>& p = parts[i][j];
          a_img.set_block(at, at, p.A[k].image_flat(cell));
          b_img.set_block(at, j * s, p.B[k].image_flat(cell));
          at += p.L;
        }
      ak.image_flat(cell) = a_img;
      bk.image_flat(cell) = b_img * e_beta_t;
    }
    out.A.push_back(ak);
    out.B.push_back(bk);
  }
  return kalman_reduce(out).first;
}

// Convenience overload: minimize each expression entry first.
template <typename K>
std::optional<FMRealization<K>> assemble_matrix_valued(
    const std::vector<std::vector<ExprPtr>>& grid, const std::vector<Matrix<K>>& centre) {
  std::vector<std::vector<FMRealization<K>>> parts(grid.size());
  for (size_t i = 0; i < grid.size(); ++i)
    for (const ExprPtr& e : grid[i]) {
      auto r = minimal_realization(e, centre);
      if (!r) return std::nullopt;
      parts[i].push_back(std::move(*r));
    }
  return assemble_matrix_valued(parts, centre);
}

// Entrywise evaluation of an expression grid with the shuffle corrections;
// the direct route the assembled realization is checked against.
template <typename K>
std::optional<Matrix<K>> eval_grid(const std::vector<std::vector<ExprPtr>>& grid,
                                   const std::vector<Matrix<K>>& x) {
  const int alpha = static_cast<int>(grid.size());
  const int beta = static_cast<int>(grid.at(0).size());
  const int n = x.at(0).rows();
  Matrix<K> values(alpha * n, beta * n);
  for (int i = 0; i < alpha; ++i)
    for (int j = 0; j < beta; ++j) {
      auto v = eval_matrices(grid[i][j], x);
      if (!v) return std::nullopt;
      values.set_block(i * n, j * n, *v);
    }
  return shuffle_matrix<K>(n, alpha) * values * shuffle_matrix<K>(n, beta).transpose();
}

}  // namespace ncfm
