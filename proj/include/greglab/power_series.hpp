#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "greglab/bigfloat.hpp"
#include "greglab/rational.hpp"

namespace greglab {

namespace detail {

inline Rational value_like(long v, const Rational&) { return Rational(v); }
inline BigFloat value_like(long v, const BigFloat& like) { return BigFloat(v, like.prec()); }

inline bool invertible(const Rational& v) { return sgn(v) != 0; }
inline bool invertible(const BigFloat& v) { return !v.is_zero(); }

}  // namespace detail

// Truncated Taylor series with exact (Rational) or BigFloat coefficients:
// everything is computed modulo z^(order+1). In rational mode all five
// operations (+, *, /, exp, log) are exact.
template <class T>
class PowerSeries {
 public:
  explicit PowerSeries(std::size_t order) : c_(order + 1) {}
  explicit PowerSeries(std::vector<T> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("PowerSeries: needs a constant term");
  }

  std::size_t order() const { return c_.size() - 1; }
  const T& operator[](std::size_t i) const { return c_.at(i); }
  T& operator[](std::size_t i) { return c_.at(i); }
  const std::vector<T>& coeffs() const { return c_; }

  PowerSeries operator+(const PowerSeries& o) const {
    check_order(o);
    PowerSeries r(order());
    for (std::size_t i = 0; i <= order(); ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
  }

  PowerSeries operator-(const PowerSeries& o) const {
    check_order(o);
    PowerSeries r(order());
    for (std::size_t i = 0; i <= order(); ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
  }

  PowerSeries operator*(const PowerSeries& o) const {
    check_order(o);
    PowerSeries r(order());
    for (std::size_t i = 0; i <= order(); ++i) {
      T acc = detail::value_like(0, c_[0]);
      for (std::size_t k = 0; k <= i; ++k) acc = acc + c_[k] * o.c_[i - k];
      r.c_[i] = std::move(acc);
    }
    return r;
  }

  PowerSeries scale(const T& s) const {
    PowerSeries r(order());
    for (std::size_t i = 0; i <= order(); ++i) r.c_[i] = c_[i] * s;
    return r;
  }

  // Long division; requires an invertible constant term in the divisor.
  PowerSeries operator/(const PowerSeries& o) const {
    check_order(o);
    if (!detail::invertible(o.c_[0]))
      throw std::domain_error("PowerSeries division needs invertible constant term");
    PowerSeries q(order());
    for (std::size_t n = 0; n <= order(); ++n) {
      T acc = c_[n];
      for (std::size_t k = 0; k < n; ++k) acc = acc - q.c_[k] * o.c_[n - k];
      q.c_[n] = acc / o.c_[0];
    }
    return q;
  }

  PowerSeries derivative() const {
    PowerSeries r(order());
    for (std::size_t i = 1; i <= order(); ++i)
      r.c_[i - 1] = c_[i] * detail::value_like(static_cast<long>(i), c_[0]);
    r.c_[order()] = detail::value_like(0, c_[0]);
    return r;
  }

  // exp(A) for A with zero constant term, via n b_n = sum_{j<=n} j a_j b_{n-j}.
  PowerSeries exp() const {
    if (detail::invertible(c_[0]))
      throw std::domain_error("PowerSeries exp needs zero constant term");
    PowerSeries b(order());
    b.c_[0] = detail::value_like(1, c_[0]);
    for (std::size_t n = 1; n <= order(); ++n) {
      T acc = detail::value_like(0, c_[0]);
      for (std::size_t j = 1; j <= n; ++j)
        acc = acc + c_[j] * detail::value_like(static_cast<long>(j), c_[0]) * b.c_[n - j];
      b.c_[n] = acc / detail::value_like(static_cast<long>(n), c_[0]);
    }
    return b;
  }

  // log(A) for A with constant term 1, via b_n = a_n - (1/n) sum (n-j) b_{n-j} a_j.
  PowerSeries log() const {
    T one = detail::value_like(1, c_[0]);
    if (!(detail::invertible(c_[0])) || !is_one(c_[0]))
      throw std::domain_error("PowerSeries log needs constant term 1");
    PowerSeries b(order());
    b.c_[0] = detail::value_like(0, c_[0]);
    for (std::size_t n = 1; n <= order(); ++n) {
      T acc = detail::value_like(0, c_[0]);
      for (std::size_t j = 1; j < n; ++j)
        acc = acc + b.c_[n - j] * detail::value_like(static_cast<long>(n - j), c_[0]) * c_[j];
      b.c_[n] = c_[n] - acc / detail::value_like(static_cast<long>(n), c_[0]);
    }
    return b;
  }

  // Horner evaluation of the truncated polynomial.
  T eval(const T& z) const {
    T acc = c_[order()];
    for (std::size_t i = order(); i-- > 0;) acc = acc * z + c_[i];
    return acc;
  }

 private:
  static bool is_one(const Rational& v) { return v == 1; }
  static bool is_one(const BigFloat& v) { return cmp(v, BigFloat(1, v.prec())) == 0; }

  void check_order(const PowerSeries& o) const {
    if (o.order() != order()) throw std::invalid_argument("PowerSeries: order mismatch");
  }

  std::vector<T> c_;
};

}  // namespace greglab
