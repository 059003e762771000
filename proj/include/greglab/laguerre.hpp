#pragma once

#include <cstddef>
#include <stdexcept>

#include "greglab/bigfloat.hpp"
#include "greglab/numkernel.hpp"

namespace greglab {

// L_n(x) by the three-term recurrence (n+1) L_{n+1} = (2n+1-x) L_n - n L_{n-1}.
inline BigFloat laguerre_eval(std::size_t n, const BigFloat& x, mpfr_prec_t prec) {
  const mpfr_prec_t wp = working_prec(prec);
  BigFloat prev(1, wp);  // L_0
  if (n == 0) return prev.rounded(prec);
  BigFloat cur = BigFloat(1, wp) - x;  // L_1
  for (std::size_t k = 1; k < n; ++k) {
    BigFloat next =
        ((BigFloat(static_cast<long>(2 * k + 1), wp) - x) * cur - prev * static_cast<long>(k)) /
        static_cast<long>(k + 1);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur.rounded(prec);
}

// Exact binomial-sum form L_n(x) = sum_k C(n,k) (-1)^k x^k/k! for rational x;
// the independent cross-check for the recurrence.
inline Rational laguerre_binomial_sum(std::size_t n, const Rational& x) {
  BinomialRows rows(n);
  Rational acc = 0;
  Rational xpow = 1;
  Rational kfact = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) {
      xpow *= x;
      kfact *= static_cast<long>(k);
    }
    Rational t = Rational(rows.at(n, k)) * xpow / kfact;
    if (k & 1)
      acc -= t;
    else
      acc += t;
  }
  return acc;
}

// Streaming L_0, L_1, L_2, ... for series loops.
class LaguerreSequence {
 public:
  LaguerreSequence(const BigFloat& x, mpfr_prec_t prec)
      : x_(x.rounded(prec)), prev_(0, prec), cur_(1, prec), n_(0), prec_(prec) {}

  // value L_n for the current index, then advance
  const BigFloat& current() const { return cur_; }
  std::size_t index() const { return n_; }

  void advance() {
    if (n_ == 0) {
      prev_ = std::move(cur_);
      cur_ = BigFloat(1, prec_) - x_;
    } else {
      BigFloat next = ((BigFloat(static_cast<long>(2 * n_ + 1), prec_) - x_) * cur_ -
                       prev_ * static_cast<long>(n_)) /
                      static_cast<long>(n_ + 1);
      prev_ = std::move(cur_);
      cur_ = std::move(next);
    }
    ++n_;
  }

 private:
  BigFloat x_;
  BigFloat prev_;
  BigFloat cur_;
  std::size_t n_;
  mpfr_prec_t prec_;
};

}  // namespace greglab
