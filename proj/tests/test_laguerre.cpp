#include <doctest.h>

#include "greglab/laguerre.hpp"

using namespace greglab;

TEST_CASE("laguerre pinned values") {
  const mpfr_prec_t P = 128;
  BigFloat x = BigFloat::from_double(3.25, P);
  CHECK(laguerre_eval(0, x, P) == BigFloat(1, P));
  // L_1(x) = 1 - x
  CHECK((laguerre_eval(1, x, P) - (BigFloat(1, P) - x)).abs() < BigFloat::pow2(-120));
  // L_2(2) = 1 - 2*2 + 4/2 = -1 from the binomial formula
  CHECK(laguerre_binomial_sum(2, Rational(2)) == -1);
  CHECK((laguerre_eval(2, BigFloat(2, P), P) + BigFloat(1, P)).abs() < BigFloat::pow2(-120));
  // L_n(0) = 1
  CHECK(laguerre_binomial_sum(5, Rational(0)) == 1);
  CHECK(laguerre_eval(5, BigFloat(0, P), P) == BigFloat(1, P));
}

TEST_CASE("recurrence matches the exact binomial sum for n <= 30 at four x values") {
  const mpfr_prec_t P = 128;
  for (Rational x : {make_rational(1, 2), Rational(1), Rational(2), Rational(10)}) {
    BigFloat bx = BigFloat::from_rational(x, working_prec(P));
    for (std::size_t n = 0; n <= 30; ++n) {
      BigFloat rec = laguerre_eval(n, bx, P);
      BigFloat ref = BigFloat::from_rational(laguerre_binomial_sum(n, x), working_prec(P));
      CHECK((rec - ref).abs() < BigFloat::pow2(12 - P));
    }
  }
}

TEST_CASE("streaming sequence agrees with direct evaluation") {
  const mpfr_prec_t P = 96;
  BigFloat x = BigFloat::from_double(0.75, working_prec(P));
  LaguerreSequence seq(x, working_prec(P));
  for (std::size_t n = 0; n <= 40; ++n) {
    CHECK((seq.current() - laguerre_eval(n, x, P)).abs() < BigFloat::pow2(40 - P));
    seq.advance();
  }
}
