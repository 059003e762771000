#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "greglab/bigfloat.hpp"
#include "greglab/numkernel.hpp"
#include "greglab/power_series.hpp"
#include "greglab/rational.hpp"

namespace greglab {

namespace detail {

// Exact Bernoulli numbers, used internally by the Euler-Maclaurin tails and
// the polygamma asymptotics. Not exported as a number family.
inline const Rational& bernoulli(std::size_t m) {
  static std::mutex mu;
  static std::vector<Rational> cache{Rational(1)};
  static BinomialRows rows;
  std::lock_guard<std::mutex> lock(mu);
  while (cache.size() <= m) {
    std::size_t r = cache.size();
    rows.ensure(r + 1);
    Rational acc = 0;
    for (std::size_t j = 0; j < r; ++j) acc += Rational(rows.at(r + 1, j)) * cache[j];
    cache.push_back(-acc / Rational(static_cast<long>(r + 1)));
  }
  return cache[m];
}

struct EulerMaclaurinParams {
  unsigned long cutoff;  // number of direct terms N
  unsigned long corrections;  // number of B_{2k} correction terms K
};

inline EulerMaclaurinParams em_params(mpfr_prec_t user_bits) {
  auto p = static_cast<unsigned long>(user_bits);
  return {(p * 35 + 99) / 100 + 20, 2 * ((p + 15) / 16)};
}

inline BigInt rising_factorial(unsigned long s, unsigned long len) {
  BigInt r = 1;
  for (unsigned long i = 0; i < len; ++i) r *= BigInt(static_cast<long>(s + i));
  return r;
}

}  // namespace detail

// zeta(s) for integer s >= 2 by Euler-Maclaurin correction of the partial
// sum: N direct terms, then N^(1-s)/(s-1) - N^(-s)/2 and K B_{2k} terms.
inline BigFloat zeta(unsigned long s, mpfr_prec_t prec) {
  if (s < 2) throw std::invalid_argument("zeta: s must be >= 2");
  const mpfr_prec_t wp = working_prec(prec);
  const auto [N, K] = detail::em_params(prec);
  const BigFloat threshold = BigFloat::pow2(-static_cast<long>(wp + 10));

  BigFloat sum(wp);
  for (unsigned long n = 1; n <= N; ++n) {
    BigFloat t =
        BigFloat(1, wp) / BigFloat::from_bigint(bigint_pow(BigInt(static_cast<long>(n)), s), wp);
    sum += t;
  }
  BigInt Npow = bigint_pow(BigInt(static_cast<long>(N)), s - 1);
  sum += BigFloat::from_rational(rational_from(BigInt(1), BigInt(static_cast<long>(s - 1)) * Npow),
                                 wp);
  Npow *= static_cast<long>(N);  // N^s
  sum -= BigFloat::from_rational(rational_from(BigInt(1), 2 * Npow), wp);
  for (unsigned long k = 1; k <= K; ++k) {
    // B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^(-(s+2k-1))
    Npow *= static_cast<long>(k == 1 ? N : N * N);  // now N^(s+2k-1)
    Rational coeff = detail::bernoulli(2 * k) / Rational(factorial(2 * k));
    coeff *= Rational(detail::rising_factorial(s, 2 * k - 1));
    coeff /= Rational(Npow);
    BigFloat t = BigFloat::from_rational(coeff, wp);
    sum += t;
    if (t.abs() < threshold) break;
  }
  return sum.rounded(prec);
}

// Euler's constant via gamma = H_N - ln N - 1/(2N) + sum B_{2k}/(2k N^{2k}),
// with exact H_N. Independent of the Gregory-series route.
inline BigFloat euler_gamma(mpfr_prec_t prec) {
  const mpfr_prec_t wp = working_prec(prec);
  const auto [N, K] = detail::em_params(prec);
  const BigFloat threshold = BigFloat::pow2(-static_cast<long>(wp + 10));

  HarmonicTable ht(N);
  BigFloat g = BigFloat::from_rational(ht.harmonic(N), wp);
  g -= BigFloat::ln(BigFloat(static_cast<long>(N), wp), wp);
  g -= BigFloat::from_rational(make_rational(1, 2 * static_cast<long>(N)), wp);
  BigInt Npow = 1;
  for (unsigned long k = 1; k <= K; ++k) {
    Npow *= static_cast<long>(N * N);
    Rational coeff = detail::bernoulli(2 * k) / (Rational(2 * static_cast<long>(k)) * Rational(Npow));
    BigFloat t = BigFloat::from_rational(coeff, wp);
    g += t;
    if (t.abs() < threshold) break;
  }
  return g.rounded(prec);
}

namespace detail {

// Recurrence shift distance so that the asymptotic expansions reach the
// working precision: e^(-2 pi x) <= 2^-(wp+10), never below 16.
inline long psi_cutoff(mpfr_prec_t wp) {
  long c = static_cast<long>(std::ceil(0.11033 * static_cast<double>(wp + 10))) + 1;
  return c < 16 ? 16 : c;
}

enum class PsiOrder { digamma, trigamma, tetragamma };

inline BigFloat psi_impl(const BigFloat& x, mpfr_prec_t prec, PsiOrder order) {
  if (x.sgn() <= 0) throw std::domain_error("polygamma: argument must be positive");
  const mpfr_prec_t wp = working_prec(prec);
  const long cutoff = psi_cutoff(wp);
  const BigFloat threshold = BigFloat::pow2(-static_cast<long>(wp + 10));

  // shift x upward until y >= cutoff, collecting recurrence corrections
  BigFloat y = x.rounded(wp);
  BigFloat shift_acc(wp);
  const BigFloat limit(cutoff, wp);
  while (y < limit) {
    BigFloat inv = BigFloat(1, wp) / y;
    switch (order) {
      case PsiOrder::digamma:
        shift_acc += inv;  // psi(x) = psi(x+1) - 1/x
        break;
      case PsiOrder::trigamma:
        shift_acc += inv * inv;  // psi'(x) = psi'(x+1) + 1/x^2
        break;
      case PsiOrder::tetragamma:
        shift_acc += inv * inv * inv * 2L;  // psi''(x) = psi''(x+1) - 2/x^3
        break;
    }
    y += BigFloat(1, wp);
  }

  BigFloat inv_y = BigFloat(1, wp) / y;
  BigFloat inv_y2 = inv_y * inv_y;
  BigFloat r(wp);
  switch (order) {
    case PsiOrder::digamma:
      r = BigFloat::ln(y, wp) - inv_y / 2L;
      break;
    case PsiOrder::trigamma:
      r = inv_y + inv_y2 / 2L;
      break;
    case PsiOrder::tetragamma:
      r = -inv_y2 - inv_y2 * inv_y;
      break;
  }

  BigFloat pw = inv_y2;  // y^(-2k), k = 1, 2, ...
  BigFloat prev_mag(wp);
  for (unsigned long k = 1; k < 20000; ++k) {
    Rational b = detail::bernoulli(2 * k);
    BigFloat term(wp);
    switch (order) {
      case PsiOrder::digamma:
        term = BigFloat::from_rational(b / Rational(2 * static_cast<long>(k)), wp) * pw;
        break;
      case PsiOrder::trigamma:
        term = BigFloat::from_rational(b, wp) * pw * inv_y;
        break;
      case PsiOrder::tetragamma:
        term = BigFloat::from_rational(b * Rational(2 * static_cast<long>(k) + 1), wp) * pw * inv_y2;
        break;
    }
    BigFloat mag = term.abs();
    if (k > 1 && mag > prev_mag) break;  // asymptotic series started diverging
    switch (order) {
      case PsiOrder::digamma:
        r -= term;
        break;
      case PsiOrder::trigamma:
        r += term;
        break;
      case PsiOrder::tetragamma:
        r -= term;
        break;
    }
    if (mag < threshold) break;
    prev_mag = std::move(mag);
    pw *= inv_y2;
  }

  switch (order) {
    case PsiOrder::digamma:
      r -= shift_acc;
      break;
    case PsiOrder::trigamma:
      r += shift_acc;
      break;
    case PsiOrder::tetragamma:
      r -= shift_acc;
      break;
  }
  return r.rounded(prec);
}

}  // namespace detail

inline BigFloat digamma(const BigFloat& x, mpfr_prec_t prec) {
  return detail::psi_impl(x, prec, detail::PsiOrder::digamma);
}
inline BigFloat trigamma(const BigFloat& x, mpfr_prec_t prec) {
  return detail::psi_impl(x, prec, detail::PsiOrder::trigamma);
}
inline BigFloat tetragamma(const BigFloat& x, mpfr_prec_t prec) {
  return detail::psi_impl(x, prec, detail::PsiOrder::tetragamma);
}

inline BigFloat digamma(double x, mpfr_prec_t prec) {
  return digamma(BigFloat::from_double(x, working_prec(prec)), prec);
}
inline BigFloat trigamma(double x, mpfr_prec_t prec) {
  return trigamma(BigFloat::from_double(x, working_prec(prec)), prec);
}
inline BigFloat tetragamma(double x, mpfr_prec_t prec) {
  return tetragamma(BigFloat::from_double(x, working_prec(prec)), prec);
}

// M1 = int_1^2 (psi(1+t)+gamma)/t dt by the geometrically convergent series
// M1 = sum_{n>=1} H_n^- (zeta(n+1) - 1); terms decay like 2^-n. The
// logarithmic series below is the slow secondary cross-check.
inline BigFloat m1_constant(mpfr_prec_t prec) {
  const mpfr_prec_t wp = working_prec(prec);
  const BigFloat threshold = BigFloat::pow2(-static_cast<long>(wp + 10));
  HarmonicTable ht;
  KahanSum sum(wp);
  for (std::size_t n = 1; n < 100000; ++n) {
    ht.ensure(n);
    BigFloat zm1 = zeta(n + 1, wp) - BigFloat(1, wp);
    sum.add(BigFloat::from_rational(ht.skew(n), wp) * zm1);
    if (zm1 < threshold) break;  // |H_n^-| <= 1 bounds the term by zm1
  }
  return sum.value().rounded(prec);
}

// Partial sum of M1 = sum (1/n) ln(1 + 1/(n+1)); increasing, bounded by M1.
inline BigFloat m1_log_series_partial(std::size_t terms, mpfr_prec_t prec) {
  const mpfr_prec_t wp = working_prec(prec);
  KahanSum sum(wp);
  for (std::size_t n = 1; n <= terms; ++n) {
    BigFloat ratio = BigFloat::from_rational(
        make_rational(static_cast<long>(n + 2), static_cast<long>(n + 1)), wp);
    sum.add(BigFloat::ln(ratio, wp) / static_cast<long>(n));
  }
  return sum.value().rounded(prec);
}

// Coefficients of psi(z+1) + gamma = sum_{k>=1} (-1)^(k-1) zeta(k+1) z^k.
inline PowerSeries<BigFloat> psi_taylor_series(std::size_t order, mpfr_prec_t prec) {
  if (order < 1) throw std::invalid_argument("psi_taylor_series: order must be >= 1");
  const mpfr_prec_t wp = working_prec(prec);
  PowerSeries<BigFloat> s(order);
  s[0] = BigFloat(0, wp);
  for (std::size_t k = 1; k <= order; ++k) {
    BigFloat z = zeta(k + 1, wp);
    s[k] = (k & 1) ? z : -z;
  }
  for (std::size_t k = 0; k <= order; ++k) s[k].round_to(prec);
  return s;
}

// Taylor coefficients of 1/Gamma(1+z), via
// exp(gamma z - sum_{k>=2} (-1)^k zeta(k) z^k / k).
inline PowerSeries<BigFloat> reciprocal_gamma_series(std::size_t order, mpfr_prec_t prec) {
  const mpfr_prec_t wp = working_prec(prec);
  PowerSeries<BigFloat> a(order);
  a[0] = BigFloat(0, wp);
  if (order >= 1) a[1] = euler_gamma(wp);
  for (std::size_t k = 2; k <= order; ++k) {
    BigFloat z = zeta(k, wp) / static_cast<long>(k);
    a[k] = (k & 1) ? z : -z;
  }
  PowerSeries<BigFloat> r = a.exp();
  for (std::size_t k = 0; k <= order; ++k) r[k].round_to(prec);
  return r;
}

// Taylor coefficients of f(z) = x^z / Gamma(z+1): the product of the
// exp(z ln x) series and 1/Gamma(1+z). Coefficient m is f^(m)(0)/m!.
inline PowerSeries<BigFloat> xz_over_gamma_coeffs(const BigFloat& x, std::size_t order,
                                                  mpfr_prec_t prec) {
  if (x.sgn() <= 0) throw std::domain_error("xz_over_gamma_coeffs: x must be positive");
  const mpfr_prec_t wp = working_prec(prec);
  BigFloat lx = BigFloat::ln(x.rounded(wp), wp);
  PowerSeries<BigFloat> e(order);
  e[0] = BigFloat(1, wp);
  for (std::size_t j = 1; j <= order; ++j) e[j] = e[j - 1] * lx / static_cast<long>(j);
  PowerSeries<BigFloat> r = e * reciprocal_gamma_series(order, wp);
  for (std::size_t k = 0; k <= order; ++k) r[k].round_to(prec);
  return r;
}

// Concurrent-read cache of named reference constants; recomputes on a
// higher-precision request, never serves a value computed at lower precision
// than asked for.
class ConstantStore {
 public:
  static ConstantStore& instance() {
    static ConstantStore store;
    return store;
  }

  // name in {gamma, ln2, pi, m1, zeta2, zeta3, ...}
  BigFloat get(const std::string& name, mpfr_prec_t prec) {
    {
      std::shared_lock lock(mu_);
      auto it = cache_.find(name);
      if (it != cache_.end() && it->second.prec() >= prec) return it->second.rounded(prec);
    }
    BigFloat v = compute(name, prec);
    std::unique_lock lock(mu_);
    auto it = cache_.find(name);
    if (it == cache_.end() || it->second.prec() < prec) cache_.insert_or_assign(name, v);
    return v;
  }

  static bool known(const std::string& name) {
    if (name == "gamma" || name == "ln2" || name == "pi" || name == "m1") return true;
    return parse_zeta(name) >= 2;
  }

 private:
  static long parse_zeta(const std::string& name) {
    if (name.size() < 5 || name.substr(0, 4) != "zeta") return -1;
    for (std::size_t i = 4; i < name.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
    return std::stol(name.substr(4));
  }

  static BigFloat compute(const std::string& name, mpfr_prec_t prec) {
    if (name == "gamma") return euler_gamma(prec);
    if (name == "ln2") return BigFloat::ln2(prec);
    if (name == "pi") return BigFloat::pi(prec);
    if (name == "m1") return m1_constant(prec);
    long s = parse_zeta(name);
    if (s >= 2) return zeta(static_cast<unsigned long>(s), prec);
    throw std::invalid_argument("ConstantStore: unknown constant " + name);
  }

  std::shared_mutex mu_;
  std::map<std::string, BigFloat> cache_;
};

}  // namespace greglab
