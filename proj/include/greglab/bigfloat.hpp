#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "greglab/rational.hpp"

namespace greglab {

// Every user-facing pipeline runs at the requested precision plus this guard
// margin; results are rounded back to the requested precision at the end.
inline constexpr mpfr_prec_t kGuardBits = 64;

inline mpfr_prec_t working_prec(mpfr_prec_t user_bits) { return user_bits + kGuardBits; }

// Value-semantic arbitrary-precision float. Each value carries its own
// precision; binary operators round to the wider of the two operand
// precisions, compound assignment rounds to the precision of the target.
// Rounding is always to nearest (ties to even), so every pipeline is
// bit-deterministic for a fixed configuration.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 128) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }

  BigFloat(long value, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, value, MPFR_RNDN);
  }

  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }

  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }

  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }

  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }

  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat from_int(long v, mpfr_prec_t prec) { return BigFloat(v, prec); }

  static BigFloat from_bigint(const BigInt& v, mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_set_z(r.v_, v.get_mpz_t(), MPFR_RNDN);
    return r;
  }

  // Exact when representable in `prec` bits, correctly rounded otherwise.
  static BigFloat from_rational(const Rational& q, mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
    return r;
  }

  static BigFloat from_double(double d, mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_set_d(r.v_, d, MPFR_RNDN);
    return r;
  }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

  // Re-round in place.
  void round_to(mpfr_prec_t prec) { mpfr_prec_round(v_, prec, MPFR_RNDN); }

  BigFloat rounded(mpfr_prec_t prec) const {
    BigFloat r(prec);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sgn() const { return mpfr_sgn(v_); }

  BigFloat abs() const {
    BigFloat r(prec());
    mpfr_abs(r.v_, v_, MPFR_RNDN);
    return r;
  }

  BigFloat neg() const {
    BigFloat r(prec());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  BigFloat operator-() const { return neg(); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec()));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec()));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec()));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec()));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  BigFloat& operator+=(const BigFloat& o) {
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator-=(const BigFloat& o) {
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator*=(const BigFloat& o) {
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator/=(const BigFloat& o) {
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

  BigFloat& mul_si(long k) {
    mpfr_mul_si(v_, v_, k, MPFR_RNDN);
    return *this;
  }
  BigFloat& div_si(long k) {
    mpfr_div_si(v_, v_, k, MPFR_RNDN);
    return *this;
  }

  friend BigFloat operator*(const BigFloat& a, long k) {
    BigFloat r(a.prec());
    mpfr_mul_si(r.v_, a.v_, k, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator/(const BigFloat& a, long k) {
    BigFloat r(a.prec());
    mpfr_div_si(r.v_, a.v_, k, MPFR_RNDN);
    return r;
  }

  friend int cmp(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return cmp(a, b) < 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return cmp(a, b) > 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return cmp(a, b) <= 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return cmp(a, b) >= 0; }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const BigFloat& a, const BigFloat& b) { return cmp(a, b) != 0; }

  static BigFloat pi(mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  static BigFloat ln2(mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_const_log2(r.v_, MPFR_RNDN);
    return r;
  }

  static BigFloat ln(const BigFloat& x, mpfr_prec_t prec) {
    if (x.sgn() <= 0) throw std::domain_error("ln of non-positive value");
    BigFloat r(prec);
    mpfr_log(r.v_, x.v_, MPFR_RNDN);
    return r;
  }

  BigFloat pow_si(long e) const {
    BigFloat r(prec());
    mpfr_pow_si(r.v_, v_, e, MPFR_RNDN);
    return r;
  }

  // 2^e as an exact value, handy for tolerance thresholds.
  static BigFloat pow2(long e, mpfr_prec_t prec = 64) {
    BigFloat r(prec);
    mpfr_set_si_2exp(r.v_, 1, e, MPFR_RNDN);
    return r;
  }

  // Scientific-notation decimal string with a fixed digit count:
  // "-d.ddd...e[+-]EE". Deterministic for fixed input and digit count.
  std::string to_decimal(std::size_t digits = 20) const {
    if (digits < 2) digits = 2;
    if (mpfr_zero_p(v_)) return "0";
    if (!mpfr_number_p(v_)) return mpfr_nan_p(v_) ? "nan" : (mpfr_sgn(v_) > 0 ? "inf" : "-inf");
    mpfr_exp_t e10 = 0;
    char* raw = mpfr_get_str(nullptr, &e10, 10, digits, v_, MPFR_RNDN);
    std::string s(raw);
    mpfr_free_str(raw);
    std::string sign;
    if (!s.empty() && s[0] == '-') {
      sign = "-";
      s.erase(s.begin());
    }
    std::string out = sign + s.substr(0, 1) + "." + s.substr(1) + "e" + std::to_string(e10 - 1);
    return out;
  }

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  mpfr_t v_;
};

// Compensated (Kahan) accumulator at a fixed precision. Slowly-converging
// alternating sums lose low bits to cancellation; this keeps the running
// error at O(1) ulp instead of O(N).
class KahanSum {
 public:
  explicit KahanSum(mpfr_prec_t prec) : sum_(prec), carry_(prec), prec_(prec) {}

  void add(const BigFloat& x) {
    BigFloat y = x.rounded(prec_);
    y -= carry_;
    BigFloat t = sum_;
    t += y;
    carry_ = t;
    carry_ -= sum_;
    carry_ -= y;
    sum_ = std::move(t);
  }

  const BigFloat& value() const { return sum_; }

 private:
  BigFloat sum_;
  BigFloat carry_;
  mpfr_prec_t prec_;
};

}  // namespace greglab
