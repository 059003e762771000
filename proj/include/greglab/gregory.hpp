#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "greglab/bigfloat.hpp"
#include "greglab/rational.hpp"

namespace greglab {

// Magnitudes |G_n| = |c_n|/n! of the Gregory coefficients for n = 0..n_max,
// at `prec` bits. Uses the reciprocal-convolution recurrence
//
//   |G_n| = 1/(n+1) - sum_{k=1}^{n-1} |G_k|/(n-k+1),   |G_0| = 1, |G_1| = 1/2,
//
// evaluated in fixed-point integers with F fraction bits (all quantities lie
// in [0,1]), F chosen comfortably above prec. Cost is O(n_max^2) word-sized
// multiply-adds; n_max = 10^4 takes a couple of seconds.
inline std::vector<BigFloat> gregory_magnitudes(std::size_t n_max, mpfr_prec_t prec) {
  const mp_bitcnt_t F = 64 * ((static_cast<mp_bitcnt_t>(prec) + 96 + 63) / 64);
  BigInt one = BigInt(1) << F;

  std::vector<BigInt> recip(n_max + 2);  // recip[j] = round(2^F / j)
  for (std::size_t j = 2; j < recip.size(); ++j)
    recip[j] = (one + BigInt(static_cast<long>(j / 2))) / BigInt(static_cast<long>(j));

  std::vector<BigInt> g(n_max + 1);
  g[0] = one;
  if (n_max >= 1) g[1] = recip[2];

  BigInt acc, half;
  half = BigInt(1) << (F - 1);
  for (std::size_t n = 2; n <= n_max; ++n) {
    acc = 0;
    for (std::size_t k = 1; k < n; ++k)
      mpz_addmul(acc.get_mpz_t(), g[k].get_mpz_t(), recip[n - k + 1].get_mpz_t());
    acc += half;
    acc >>= F;
    g[n] = recip[n + 1] - acc;
    if (sgn(g[n]) < 0) throw std::logic_error("gregory_magnitudes: negative magnitude");
  }

  std::vector<BigFloat> out;
  out.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    BigFloat v(prec);
    mpfr_set_z_2exp(v.raw(), g[n].get_mpz_t(), -static_cast<mpfr_exp_t>(F), MPFR_RNDN);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace greglab
