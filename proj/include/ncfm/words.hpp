#pragma once

#include <cstdint>
#include <vector>

namespace ncfm {

// A word over the free monoid on d generators; letters are 0-based variable
// indices. The canonical order used for every serialized table and every
// generator enumeration is: by length first, then lexicographically.
using Word = std::vector<int>;

inline std::vector<Word> words_of_length(int d, int len) {
  std::vector<Word> out;
  Word w(len, 0);
  if (len == 0) {
    out.push_back(w);
    return out;
  }
  while (true) {
    out.push_back(w);
    int pos = len - 1;
    while (pos >= 0 && w[pos] == d - 1) {
      w[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++w[pos];
  }
  return out;
}

inline std::vector<Word> words_up_to(int d, int max_len) {
  std::vector<Word> out;
  for (int len = 0; len <= max_len; ++len) {
    std::vector<Word> ws = words_of_length(d, len);
    out.insert(out.end(), ws.begin(), ws.end());
  }
  return out;
}

// A basis tuple assigns to each letter position a standard basis matrix
// E_{ij} of K^{s x s}, encoded as the flat index i*s + j. Tuples of a fixed
// length are enumerated in odometer order with position 0 most significant.
using BasisTuple = std::vector<int>;

inline int basis_tuple_count(int s, int len) {
  int n = 1;
  for (int t = 0; t < len; ++t) n *= s * s;
  return n;
}

inline std::vector<BasisTuple> basis_tuples(int s, int len) {
  std::vector<BasisTuple> out;
  out.reserve(basis_tuple_count(s, len));
  BasisTuple t(len, 0);
  if (len == 0) {
    out.push_back(t);
    return out;
  }
  const int cells = s * s;
  while (true) {
    out.push_back(t);
    int pos = len - 1;
    while (pos >= 0 && t[pos] == cells - 1) {
      t[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++t[pos];
  }
  return out;
}

inline int basis_tuple_index(int s, const BasisTuple& t) {
  int idx = 0;
  for (int v : t) idx = idx * (s * s) + v;
  return idx;
}

}  // namespace ncfm
