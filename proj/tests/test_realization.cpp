#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures_ex25.hpp"
#include "ncfm/realization.hpp"
#include "ncfm/rng.hpp"
#include "ncfm/taylor.hpp"

using namespace ncfm;
using Q = Rational;
using MQ = Matrix<Q>;
using fixtures::mq;
using fixtures::mq_frac;

namespace {

const ExprPtr rcomm = parse("(x1*x2 - x2*x1)^-1", 2);

}  // namespace

TEST_CASE("synthesis of monomials reproduces the R1 tuple") {
  auto yc = fixtures::centre_yc();
  FMRealization<Q> r1 = synth_var(0, yc);
  CHECK(r1.L == 2);
  CHECK(r1.D == yc[0]);
  CHECK(r1.C == MQ::identity(2));
  CHECK(r1.A[0].is_zero());
  CHECK(r1.A[1].is_zero());
  CHECK(r1.B[0] == BlockLinearMap<Q>::id(2));
  CHECK(r1.B[1].is_zero());

  Rng rng(2);
  auto x = rng.integer_tuple<Q>(2, 4, 3);
  CHECK(*r1.evaluate(x) == x[0]);
  CHECK(*r1.evaluate(yc) == yc[0]);
}

TEST_CASE("series product x1*x2 reproduces the R3 tuple") {
  auto yc = fixtures::centre_yc();
  FMRealization<Q> r3 = synth_mul(synth_var(0, yc), synth_var(1, yc));
  CHECK(r3.L == 4);
  CHECK(r3.D == mq(2, 2, {0, -1, 1, 0}));
  CHECK(r3.C == mq(2, 4, {1, 0, 0, 1, 0, 1, 1, 0}));
  MQ rf_a1(4, 4);
  rf_a1.set_block(0, 2, MQ::identity(2));
  CHECK(r3.A[0] == BlockLinearMap<Q>::from_right_factor(2, rf_a1));
  CHECK(r3.A[1].is_zero());
  MQ rf_b1(4, 2);
  rf_b1.set_block(0, 0, mq(2, 2, {1, 0, 0, -1}));
  CHECK(r3.B[0] == BlockLinearMap<Q>::from_right_factor(2, rf_b1));
  MQ rf_b2(4, 2);
  rf_b2.set_block(2, 0, MQ::identity(2));
  CHECK(r3.B[1] == BlockLinearMap<Q>::from_right_factor(2, rf_b2));
}

TEST_CASE("left scale by -1 reproduces the R4 tuple of -x2*x1") {
  auto yc = fixtures::centre_yc();
  FMRealization<Q> r4 = synth_scale_left(Q(-1), synth_mul(synth_var(1, yc), synth_var(0, yc)));
  CHECK(r4.D == mq(2, 2, {0, -1, 1, 0}));
  CHECK(r4.C == mq(2, 4, {-1, 0, -1, 0, 0, -1, 0, 1}));
  // A and B are kept from x2*x1
  MQ rf_a2(4, 4);
  rf_a2.set_block(0, 2, MQ::identity(2));
  CHECK(r4.A[1] == BlockLinearMap<Q>::from_right_factor(2, rf_a2));
  CHECK(r4.A[0].is_zero());
  MQ rf_b1(4, 2);
  rf_b1.set_block(2, 0, MQ::identity(2));
  CHECK(r4.B[0] == BlockLinearMap<Q>::from_right_factor(2, rf_b1));
  MQ rf_b2(4, 2);
  rf_b2.set_block(0, 0, mq(2, 2, {0, 1, 1, 0}));
  CHECK(r4.B[1] == BlockLinearMap<Q>::from_right_factor(2, rf_b2));
}

TEST_CASE("golden synthesis: the full worked example, entry for entry") {
  auto yc = fixtures::centre_yc();
  auto synth = synthesize(rcomm, yc);
  REQUIRE(synth.has_value());
  FMRealization<Q> expected = fixtures::ex25_full();

  CHECK(synth->L == 8);
  CHECK(synth->D == expected.D);
  CHECK(synth->C == expected.C);
  for (int k = 0; k < 2; ++k) {
    CHECK(synth->A[k] == expected.A[k]);
    CHECK(synth->B[k] == expected.B[k]);
  }
}

TEST_CASE("synth_const edge cases") {
  auto yc = fixtures::centre_yc();
  Rng rng(17);
  auto x = rng.integer_tuple<Q>(2, 2, 3);
  CHECK(synth_const(Q(0), yc).evaluate(x)->is_zero());
  CHECK(*synth_const(Q(1), yc).evaluate(x) == MQ::identity(2));
  CHECK(*synth_const(Q(3), yc).evaluate(x) == MQ::identity(2) * Q(3));
  // inverse of a constant
  auto inv2 = synth_inv(synth_const(Q(2), yc));
  REQUIRE(inv2.has_value());
  CHECK(*inv2->evaluate(x) == MQ::identity(2) * Q(1, 2));
}

TEST_CASE("dom_contains: centre, zero maps, singular-commutator criterion") {
  auto yc = fixtures::centre_yc();
  auto r = synthesize(rcomm, yc);
  REQUIRE(r.has_value());

  CHECK(r->dom_contains(yc));
  std::vector<MQ> centre_m2{kron(MQ::identity(2), yc[0]), kron(MQ::identity(2), yc[1])};
  CHECK(r->pencil(centre_m2) == MQ::identity(16));

  FMRealization<Q> zero_a = synth_var(0, yc);
  Rng rng0(20);
  for (int t = 0; t < 5; ++t) CHECK(zero_a.dom_contains(rng0.integer_tuple<Q>(2, 4, 4)));

  ExprPtr comm = parse("x1*x2 - x2*x1", 2);
  Rng rng(21);
  int in_count = 0, out_count = 0;
  for (int t = 0; t < 100; ++t) {
    int n = t % 2 == 0 ? 2 : 4;
    auto x = rng.integer_tuple<Q>(2, n, 3);
    bool det_nonzero = is_invertible(*eval_matrices(comm, x));
    CHECK(r->dom_contains(x) == det_nonzero);
    (det_nonzero ? in_count : out_count)++;
  }
  CHECK(in_count > 0);
  CHECK(out_count > 0);
}

TEST_CASE("evaluate agrees with direct expression evaluation on random points") {
  auto yc = fixtures::centre_yc();
  auto r = synthesize(rcomm, yc);
  REQUIRE(r.has_value());
  CHECK(*r->evaluate(yc) == r->D);

  Rng rng(22);
  int found = 0;
  while (found < 30) {
    int n = 2 * (1 + rng.integer(0, 1));
    auto x = rng.integer_tuple<Q>(2, n, 3);
    auto direct = eval_matrices(rcomm, x);
    if (!direct) continue;
    ++found;
    auto via = r->evaluate(x);
    REQUIRE(via.has_value());
    CHECK(*via == *direct);
  }
}

TEST_CASE("evaluate respects direct sums") {
  auto yc = fixtures::centre_yc();
  auto r = synthesize(rcomm, yc);
  Rng rng(23);
  int found = 0;
  while (found < 5) {
    auto x = rng.integer_tuple<Q>(2, 2, 3);
    auto y = rng.integer_tuple<Q>(2, 2, 3);
    auto vx = r->evaluate(x), vy = r->evaluate(y);
    if (!vx || !vy) continue;
    ++found;
    std::vector<MQ> xy{direct_sum(x[0], y[0]), direct_sum(x[1], y[1])};
    CHECK(*r->evaluate(xy) == direct_sum(*vx, *vy));
  }
}

TEST_CASE("synthesis containment and agreement across fixture expressions") {
  auto yc = fixtures::centre_yc();
  std::vector<const char*> texts{"x1*x2", "x1*x2 - x2*x1", "(x1*x2 - x2*x1)^-1", "(x1 + x2)^-1",
                                 "(x1*x2 + x2*x1)^-1"};
  Rng rng(24);
  for (const char* text : texts) {
    ExprPtr e = parse(text, 2);
    auto centre = text == std::string("(x1*x2 + x2*x1)^-1") ? fixtures::centre_yh() : yc;
    auto r = synthesize(e, centre);
    REQUIRE(r.has_value());
    for (int m = 1; m <= 2; ++m) {
      for (int t = 0; t < 50; ++t) {
        auto x = rng.integer_tuple<Q>(2, 2 * m, 3);
        auto direct = eval_matrices(e, x);
        if (!direct) continue;
        CHECK(r->dom_contains(x));
        CHECK(*r->evaluate(x) == *direct);
      }
    }
  }
}

TEST_CASE("synthesis additivity and multiplicativity on random pairs") {
  auto yc = fixtures::centre_yc();
  ExprPtr e1 = parse("x1*x2 + 2*x1", 2);
  ExprPtr e2 = parse("(x1 + x2)^-1", 2);
  auto r1 = synthesize(e1, yc);
  auto r2 = synthesize(e2, yc);
  auto sum = synth_add(*r1, *r2);
  auto prod = synth_mul(*r1, *r2);
  Rng rng(25);
  int found = 0;
  while (found < 20) {
    auto x = rng.integer_tuple<Q>(2, 2, 3);
    auto v1 = r1->evaluate(x);
    auto v2 = eval_matrices(e2, x);
    if (!v2) continue;
    ++found;
    CHECK(*sum.evaluate(x) == *v1 + *v2);
    CHECK(*prod.evaluate(x) == *v1 * *v2);
  }
  // adding the zero function and multiplying by one are evaluation-neutral
  auto zero = synth_const(Q(0), yc);
  auto one = synth_const(Q(1), yc);
  auto padded = synth_add(*r1, zero);
  auto scaled = synth_mul(*r1, one);
  for (int t = 0; t < 10; ++t) {
    auto x = rng.integer_tuple<Q>(2, 2, 3);
    CHECK(*padded.evaluate(x) == *r1->evaluate(x));
    CHECK(*scaled.evaluate(x) == *r1->evaluate(x));
  }
}

TEST_CASE("inv of inv is evaluation-neutral; singular D rejected") {
  auto yc = fixtures::centre_yc();
  auto r = synthesize(parse("x1 + x2", 2), yc);
  auto rinv = synth_inv(*r);
  REQUIRE(rinv.has_value());
  auto rinvinv = synth_inv(*rinv);
  REQUIRE(rinvinv.has_value());
  Rng rng(26);
  int found = 0;
  while (found < 10) {
    auto x = rng.integer_tuple<Q>(2, 2, 3);
    auto direct = eval_matrices(parse("x1 + x2", 2), x);
    if (!is_invertible(*direct)) continue;
    ++found;
    CHECK(*rinvinv->evaluate(x) == *direct);
  }
  // commutator is singular at the centre itself
  CHECK(!synthesize(rcomm, std::vector<MQ>{MQ::identity(2), MQ::identity(2)}).has_value());
}

TEST_CASE("tt_coefficient: empty word, zero maps, oracle agreement") {
  auto yc = fixtures::centre_yc();
  auto r = synthesize(rcomm, yc);
  CHECK(r->tt_constant() == r->D);

  FMRealization<Q> var = synth_var(0, yc);  // zero A maps
  for (int c1 = 0; c1 < 4; ++c1)
    for (int c2 = 0; c2 < 4; ++c2)
      CHECK(var.tt_coefficient(Word{1}, 0,
                               {MQ::unit(2, 2, c1 / 2, c1 % 2), MQ::unit(2, 2, c2 / 2, c2 % 2)})
                .is_zero());

  // realization coefficients match the independent series oracle to order 3
  auto table = taylor_table(rcomm, yc, 3);
  REQUIRE(table.has_value());
  CHECK(table->constant_term() == r->D);
  for (const auto& [w, vals] : table->coeff) {
    if (w.empty()) continue;
    Word head(w.begin(), w.end() - 1);
    int k = w.back();
    for (const BasisTuple& t : basis_tuples(2, static_cast<int>(w.size()))) {
      std::vector<MQ> args;
      for (int cell : t) args.push_back(MQ::unit(2, 2, cell / 2, cell % 2));
      CHECK(r->tt_coefficient(head, k, args) == table->at(w, t));
    }
  }
}
