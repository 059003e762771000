#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "greglab/rational.hpp"

namespace greglab {

// Memoized Pascal rows. Binomial coefficients used by the transforms come
// from row reuse, never from factorial ratios, so everything stays in
// integer arithmetic.
class BinomialRows {
 public:
  explicit BinomialRows(std::size_t n_max = 0) { ensure(n_max); }

  void ensure(std::size_t n) {
    while (rows_.size() <= n) {
      std::size_t r = rows_.size();
      std::vector<BigInt> row(r + 1);
      row[0] = 1;
      row[r] = 1;
      for (std::size_t k = 1; k < r; ++k) row[k] = rows_[r - 1][k - 1] + rows_[r - 1][k];
      rows_.push_back(std::move(row));
    }
  }

  std::size_t n_max() const { return rows_.empty() ? 0 : rows_.size() - 1; }

  const BigInt& at(std::size_t n, std::size_t k) const {
    static const BigInt zero = 0;
    if (n >= rows_.size()) throw std::out_of_range("BinomialRows: row beyond table capacity");
    if (k > n) return zero;
    return rows_[n][k];
  }

  const std::vector<BigInt>& row(std::size_t n) const {
    if (n >= rows_.size()) throw std::out_of_range("BinomialRows: row beyond table capacity");
    return rows_[n];
  }

 private:
  std::vector<std::vector<BigInt>> rows_;
};

enum class StirlingKind { first_signed, first_unsigned, second };

// Triangular table of Stirling numbers, grown on demand. The first kind is
// stored signed (the canonical form here); the unsigned variant is a view
// applying (-1)^(n-k). Growth is single-writer; reads on a finished table
// are pure.
class StirlingTriangle {
 public:
  explicit StirlingTriangle(StirlingKind kind, std::size_t n_max = 0,
                            std::optional<std::size_t> cap = std::nullopt)
      : kind_(kind), cap_(cap) {
    rows_.push_back({BigInt(1)});  // s(0,0) = S(0,0) = 1
    ensure(n_max);
  }

  StirlingKind kind() const { return kind_; }
  std::size_t n_max() const { return rows_.size() - 1; }

  void ensure(std::size_t n) {
    if (cap_ && n > *cap_) throw std::out_of_range("StirlingTriangle: beyond table capacity");
    while (rows_.size() <= n) {
      std::size_t r = rows_.size();  // building row r from row r-1
      const auto& prev = rows_[r - 1];
      std::vector<BigInt> row(r + 1);
      bool second = kind_ == StirlingKind::second;
      for (std::size_t k = 0; k <= r; ++k) {
        BigInt v = 0;
        if (k >= 1) v = prev[k - 1];
        if (k <= r - 1) {
          if (second)
            v += BigInt(static_cast<long>(k)) * prev[k];
          else
            v -= BigInt(static_cast<long>(r - 1)) * prev[k];
        }
        row[k] = std::move(v);
      }
      rows_.push_back(std::move(row));
    }
  }

  // Entry (n,k); zero for k > n. Throws if row n has not been built.
  BigInt at(std::size_t n, std::size_t k) const {
    if (n >= rows_.size()) throw std::out_of_range("StirlingTriangle: row beyond table capacity");
    if (k > n) return 0;
    const BigInt& v = rows_[n][k];
    if (kind_ == StirlingKind::first_unsigned && ((n - k) & 1)) return -v;
    return v;
  }

  std::vector<BigInt> row(std::size_t n) const {
    if (n >= rows_.size()) throw std::out_of_range("StirlingTriangle: row beyond table capacity");
    std::vector<BigInt> r = rows_[n];
    if (kind_ == StirlingKind::first_unsigned)
      for (std::size_t k = 0; k <= n; ++k)
        if ((n - k) & 1) r[k] = -r[k];
    return r;
  }

 private:
  StirlingKind kind_;
  std::optional<std::size_t> cap_;
  std::vector<std::vector<BigInt>> rows_;  // signed first kind, or second kind
};

// Exact Cauchy numbers c_n and the scaled values G_n = c_n/n!.
// c_n is computed from the first-kind triangle: c_n = sum_k s(n,k)/(k+1).
// The generating-function route lives in gregory_series() below and serves
// as an independent oracle.
class CauchyTable {
 public:
  explicit CauchyTable(std::size_t n_max = 0) : tri_(StirlingKind::first_signed) { ensure(n_max); }

  void ensure(std::size_t n) {
    tri_.ensure(n);
    while (c_.size() <= n) {
      std::size_t r = c_.size();
      Rational c = 0;
      for (std::size_t k = 0; k <= r; ++k)
        c += rational_from(tri_.at(r, k), BigInt(static_cast<long>(k + 1)));
      g_.push_back(rational_from(c.get_num(), c.get_den() * factorial(r)));
      c_.push_back(std::move(c));
    }
  }

  std::size_t n_max() const { return c_.empty() ? 0 : c_.size() - 1; }

  const Rational& value(std::size_t n) const {
    if (n >= c_.size()) throw std::out_of_range("CauchyTable: beyond table capacity");
    return c_[n];
  }

  const Rational& gregory(std::size_t n) const {
    if (n >= g_.size()) throw std::out_of_range("CauchyTable: beyond table capacity");
    return g_[n];
  }

 private:
  StirlingTriangle tri_;
  std::vector<Rational> c_;
  std::vector<Rational> g_;
};

// Exact harmonic numbers H_n, generalized H_n^(p), and skew H_n^-.
class HarmonicTable {
 public:
  explicit HarmonicTable(std::size_t n_max = 0) {
    h_.push_back(0);
    skew_.push_back(0);
    ensure(n_max);
  }

  void ensure(std::size_t n) {
    while (h_.size() <= n) {
      long r = static_cast<long>(h_.size());
      h_.push_back(h_.back() + make_rational(1, r));
      skew_.push_back(skew_.back() + make_rational((r & 1) ? 1 : -1, r));
    }
  }

  void ensure_p(unsigned p, std::size_t n) {
    if (p < 1) throw std::invalid_argument("harmonic_p: p must be >= 1");
    auto& v = hp_[p];
    if (v.empty()) v.push_back(0);
    while (v.size() <= n) {
      std::size_t r = v.size();
      v.push_back(v.back() + rational_from(BigInt(1), bigint_pow(BigInt(static_cast<long>(r)), p)));
    }
  }

  const Rational& harmonic(std::size_t n) const {
    if (n >= h_.size()) throw std::out_of_range("HarmonicTable: beyond table capacity");
    return h_[n];
  }

  const Rational& harmonic_p(std::size_t n, unsigned p) const {
    auto it = hp_.find(p);
    if (it == hp_.end() || n >= it->second.size())
      throw std::out_of_range("HarmonicTable: beyond table capacity");
    return it->second[n];
  }

  const Rational& skew(std::size_t n) const {
    if (n >= skew_.size()) throw std::out_of_range("HarmonicTable: beyond table capacity");
    return skew_[n];
  }

 private:
  std::vector<Rational> h_;
  std::map<unsigned, std::vector<Rational>> hp_;
  std::vector<Rational> skew_;
};

// b_n = sum_k C(n,k) (-1)^k a_k, an exact involution.
inline std::vector<Rational> binomial_transform(const std::vector<Rational>& a) {
  if (a.empty()) throw std::invalid_argument("binomial_transform: empty input");
  BinomialRows rows(a.size() - 1);
  std::vector<Rational> b(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    Rational s = 0;
    const auto& row = rows.row(n);
    for (std::size_t k = 0; k <= n; ++k) {
      if (k & 1)
        s -= Rational(row[k]) * a[k];
      else
        s += Rational(row[k]) * a[k];
    }
    b[n] = std::move(s);
  }
  return b;
}

// Leading column of the difference triangle: Delta^n f(0) for n = 0..N.
// Works for any ring-like value type (Rational or BigFloat).
template <class T>
std::vector<T> leading_differences(const std::vector<T>& samples) {
  if (samples.empty()) throw std::invalid_argument("leading_differences: empty input");
  std::vector<T> work = samples;
  std::vector<T> lead;
  lead.reserve(samples.size());
  lead.push_back(work[0]);
  for (std::size_t n = 1; n < samples.size(); ++n) {
    for (std::size_t i = 0; i + n < samples.size(); ++i) work[i] = work[i + 1] - work[i];
    lead.push_back(work[0]);
  }
  return lead;
}

// Full difference triangle; row n holds Delta^n f(i) for i = 0..N-n.
// Quadratic storage, intended for moderate N (the streaming column above is
// what the quadrature machines use).
template <class T>
std::vector<std::vector<T>> difference_table(const std::vector<T>& samples) {
  if (samples.empty()) throw std::invalid_argument("difference_table: empty input");
  std::vector<std::vector<T>> rows;
  rows.push_back(samples);
  for (std::size_t n = 1; n < samples.size(); ++n) {
    const auto& prev = rows.back();
    std::vector<T> row;
    row.reserve(prev.size() - 1);
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) row.push_back(prev[i + 1] - prev[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

// Coefficients of (z)_n = z(z-1)...(z-n+1) by iterated polynomial
// multiplication; equals row n of the signed first-kind triangle.
inline std::vector<BigInt> falling_factorial_coeffs(std::size_t n) {
  std::vector<BigInt> p{BigInt(1)};
  for (std::size_t j = 0; j < n; ++j) {
    // multiply by (z - j)
    std::vector<BigInt> q(p.size() + 1);
    BigInt mj = -BigInt(static_cast<long>(j));
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i] += p[i] * mj;
      q[i + 1] += p[i];
    }
    p = std::move(q);
  }
  return p;
}

// Gregory coefficients G_n = c_n/n! by exact long division of the series
// x by ln(1+x): since ln(1+x)/x has constant term 1, G is its reciprocal.
// Independent oracle for CauchyTable.
inline std::vector<Rational> gregory_series(std::size_t n_max) {
  std::vector<Rational> lred(n_max + 1);  // ln(1+x)/x
  for (std::size_t j = 0; j <= n_max; ++j)
    lred[j] = make_rational((j & 1) ? -1 : 1, static_cast<long>(j + 1));
  std::vector<Rational> g(n_max + 1);
  g[0] = 1;
  for (std::size_t n = 1; n <= n_max; ++n) {
    Rational acc = 0;
    for (std::size_t k = 0; k < n; ++k) acc += g[k] * lred[n - k];
    g[n] = -acc;
  }
  return g;
}

namespace shared {

// Process-wide memoized tables. Growth is serialized by a mutex; reads of
// already-built entries go through the returned const reference.
inline std::mutex& table_mutex() {
  static std::mutex m;
  return m;
}

inline StirlingTriangle& first_kind() {
  static StirlingTriangle t(StirlingKind::first_signed, 64);
  return t;
}

inline StirlingTriangle& second_kind() {
  static StirlingTriangle t(StirlingKind::second, 64);
  return t;
}

inline CauchyTable& cauchy() {
  static CauchyTable t(64);
  return t;
}

inline HarmonicTable& harmonic() {
  static HarmonicTable t(64);
  return t;
}

}  // namespace shared

// Convenience entry points over the shared tables.
inline BigInt stirling_first(std::size_t n, std::size_t k) {
  std::lock_guard<std::mutex> lock(shared::table_mutex());
  shared::first_kind().ensure(n);
  return shared::first_kind().at(n, k);
}

inline BigInt stirling_first_unsigned(std::size_t n, std::size_t k) {
  BigInt v = stirling_first(n, k);
  if ((n - k) & 1) return -v;
  return v;
}

inline BigInt stirling_second(std::size_t n, std::size_t k) {
  std::lock_guard<std::mutex> lock(shared::table_mutex());
  shared::second_kind().ensure(n);
  return shared::second_kind().at(n, k);
}

inline Rational cauchy_number(std::size_t n) {
  std::lock_guard<std::mutex> lock(shared::table_mutex());
  shared::cauchy().ensure(n);
  return shared::cauchy().value(n);
}

inline Rational gregory_coefficient(std::size_t n) {
  std::lock_guard<std::mutex> lock(shared::table_mutex());
  shared::cauchy().ensure(n);
  return shared::cauchy().gregory(n);
}

inline Rational harmonic(std::size_t n) {
  std::lock_guard<std::mutex> lock(shared::table_mutex());
  shared::harmonic().ensure(n);
  return shared::harmonic().harmonic(n);
}

inline Rational harmonic_p(std::size_t n, unsigned p) {
  std::lock_guard<std::mutex> lock(shared::table_mutex());
  shared::harmonic().ensure_p(p, n);
  return shared::harmonic().harmonic_p(n, p);
}

inline Rational skew_harmonic(std::size_t n) {
  std::lock_guard<std::mutex> lock(shared::table_mutex());
  shared::harmonic().ensure(n);
  return shared::harmonic().skew(n);
}

}  // namespace greglab
