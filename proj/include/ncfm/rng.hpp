#pragma once

#include <cstdint>
#include <random>

#include "ncfm/matrix.hpp"

namespace ncfm {

// Seeded deterministic RNG. Integer draws go through explicit modular
// reduction (not std distributions, whose output is implementation-defined)
// so identical seeds give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform-ish integer in [lo, hi].
  long integer(long lo, long hi) {
    if (hi < lo) throw std::invalid_argument("Rng::integer: empty range");
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  template <typename K>
  Matrix<K> integer_matrix(int rows, int cols, long bound) {
    Matrix<K> m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        m(i, j) = field_traits<K>::from_rational(Rational(integer(-bound, bound)));
    return m;
  }

  template <typename K>
  std::vector<Matrix<K>> integer_tuple(int d, int n, long bound) {
    std::vector<Matrix<K>> x;
    for (int k = 0; k < d; ++k) x.push_back(integer_matrix<K>(n, n, bound));
    return x;
  }

  // Random invertible integer matrix, by rejection.
  template <typename K>
  Matrix<K> invertible_matrix(int n, long bound = 3) {
    while (true) {
      Matrix<K> m = integer_matrix<K>(n, n, bound);
      if (is_invertible(m)) return m;
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ncfm
