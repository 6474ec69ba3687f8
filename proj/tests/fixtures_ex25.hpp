#pragma once

// Golden fixtures for (x1*x2 - x2*x1)^-1 realized at the 2x2 centre
// Yc = ([[0,1],[1,0]], [[1,0],[0,-1]]): the full synthesized L=8 tuple and
// a minimal L=6 tuple, both with maps in the right-factor form
// X |-> (I_{L/2} (x) X) * M.

#include "ncfm/realization.hpp"

namespace fixtures {

using ncfm::BlockLinearMap;
using ncfm::FMRealization;
using ncfm::Matrix;
using ncfm::Rational;

using Q = Rational;
using MQ = Matrix<Q>;

inline MQ mq_frac(int rows, int cols, long den, std::initializer_list<long> nums) {
  MQ m(rows, cols);
  auto it = nums.begin();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = ncfm::rational_of(*it++, den);
  return m;
}

inline MQ mq(int rows, int cols, std::initializer_list<long> vals) {
  return mq_frac(rows, cols, 1, vals);
}

inline std::vector<MQ> centre_yc() {
  return {mq(2, 2, {0, 1, 1, 0}), mq(2, 2, {1, 0, 0, -1})};
}

// Hermitian-function fixture centre for (x1*x2 + x2*x1)^-1.
inline std::vector<MQ> centre_yh() {
  return {mq(2, 2, {1, 0, 0, 2}), mq(2, 2, {0, 1, 1, 0})};
}

// The synthesized (unreduced) realization: L = 8.
inline FMRealization<Q> ex25_full() {
  FMRealization<Q> r;
  r.d = 2;
  r.s = 2;
  r.centre = centre_yc();
  r.L = 8;
  r.D = mq_frac(2, 2, 2, {0, 1, -1, 0});
  r.C = mq_frac(2, 8, 2, {0, 1, 1, 0, 0, -1, 0, 1, -1, 0, 0, -1, 1, 0, 1, 0});
  r.A.push_back(BlockLinearMap<Q>::from_right_factor(
      2, mq_frac(8, 8, 2,
                 {0, -1, 1, 0, 0, 1,  0, -1,   //
                  -1, 0, 0, 1, 1, 0,  1, 0,    //
                  0, 0,  0, 0, 0, 0,  0, 0,    //
                  0, 0,  0, 0, 0, 0,  0, 0,    //
                  0, 0,  0, 0, 0, 0,  0, 0,    //
                  0, 0,  0, 0, 0, 0,  0, 0,    //
                  0, -1, -1, 0, 0, 1, 0, -1,   //
                  1, 0,  0, 1, -1, 0, -1, 0})));
  r.A.push_back(BlockLinearMap<Q>::from_right_factor(
      2, mq_frac(8, 8, 2,
                 {0, 0,  0, 0, 0, 0,  0, 0,    //
                  0, 0,  0, 0, 0, 0,  0, 0,    //
                  0, -1, -1, 0, 0, 1, 0, -1,   //
                  1, 0,  0, 1, -1, 0, -1, 0,   //
                  1, 0,  0, 1, -1, 0, 1, 0,    //
                  0, -1, -1, 0, 0, 1, 0, 1,    //
                  0, 0,  0, 0, 0, 0,  0, 0,    //
                  0, 0,  0, 0, 0, 0,  0, 0})));
  r.B.push_back(BlockLinearMap<Q>::from_right_factor(
      2, mq_frac(8, 2, 2, {0, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 1, 0})));
  r.B.push_back(BlockLinearMap<Q>::from_right_factor(
      2, mq_frac(8, 2, 2, {0, 0, 0, 0, 0, -1, 1, 0, 1, 0, 0, -1, 0, 0, 0, 0})));
  return r;
}

// The listed minimal realization: L = 6.
inline FMRealization<Q> ex25_minimal() {
  FMRealization<Q> r;
  r.d = 2;
  r.s = 2;
  r.centre = centre_yc();
  r.L = 6;
  r.D = mq_frac(2, 2, 2, {0, 1, -1, 0});
  r.C = mq_frac(2, 6, 2, {1, 0, 0, 1, 0, 2, 0, -1, 1, 0, -2, 0});
  r.A.push_back(BlockLinearMap<Q>::from_right_factor(
      2, mq_frac(6, 6, 4,
                 {0, 0,  0, 0,  0, 0,    //
                  0, 0,  0, 0,  0, 0,    //
                  -2, 0, 0, -2, 0, -4,   //
                  0, 2,  -2, 0, 4, 0,    //
                  1, 0,  0, -1, 0, -2,   //
                  0, 1,  1, 0,  -2, 0})));
  r.A.push_back(BlockLinearMap<Q>::from_right_factor(
      2, mq_frac(6, 6, 4,
                 {-2, 0, 0, -2, 0, -4,   //
                  0, 2,  -2, 0, 4, 0,    //
                  0, 0,  0, 0,  0, 0,    //
                  0, 0,  0, 0,  0, 0,    //
                  0, -1, -1, 0, -2, 0,   //
                  1, 0,  0, -1, 0, 2})));
  r.B.push_back(BlockLinearMap<Q>::from_right_factor(
      2, mq_frac(6, 2, 4, {0, 0, 0, 0, 0, -2, 2, 0, 0, -1, -1, 0})));
  r.B.push_back(BlockLinearMap<Q>::from_right_factor(
      2, mq_frac(6, 2, 4, {0, -2, 2, 0, 0, 0, 0, 0, -1, 0, 0, 1})));
  return r;
}

}  // namespace fixtures
