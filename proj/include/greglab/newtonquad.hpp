#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "greglab/bigfloat.hpp"
#include "greglab/gregory.hpp"
#include "greglab/numkernel.hpp"
#include "greglab/power_series.hpp"

namespace greglab {

// Immutable sample vector f(0), f(1), ..., f(N) in exact (Rational) or float
// (BigFloat) mode. The leading difference column is computed once on first
// use and shared by copies; reads after initialization are concurrent-safe.
template <class T>
class SampledFunction {
 public:
  explicit SampledFunction(std::vector<T> samples, std::string label = {},
                           std::optional<std::size_t> polynomial_degree = std::nullopt)
      : samples_(std::move(samples)),
        label_(std::move(label)),
        degree_(polynomial_degree),
        cache_(std::make_shared<Cache>()) {
    if (samples_.empty()) throw std::invalid_argument("SampledFunction: needs f(0)");
  }

  const std::vector<T>& samples() const { return samples_; }
  std::size_t max_node() const { return samples_.size() - 1; }
  const std::string& label() const { return label_; }
  std::optional<std::size_t> polynomial_degree() const { return degree_; }

  // Delta^n f(0) for n = 0..N.
  const std::vector<T>& leading_diffs() const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (cache_->diffs.empty()) cache_->diffs = leading_differences(samples_);
    return cache_->diffs;
  }

 private:
  struct Cache {
    std::mutex mu;
    std::vector<T> diffs;
  };

  std::vector<T> samples_;
  std::string label_;
  std::optional<std::size_t> degree_;
  std::shared_ptr<Cache> cache_;
};

template <class T>
struct QuadratureResult {
  T value;
  std::size_t terms_used = 0;
  T last_term;  // magnitude of the final added term
  bool exact = false;
};

// The difference cascade is an alternating binomial sum, so sample rounding
// errors are amplified by up to ~2^N. Float-mode samples must therefore be
// built at roughly N bits beyond the working precision; this is the
// precision float-mode callers should construct samples at.
inline mpfr_prec_t recommended_sample_prec(std::size_t max_node, mpfr_prec_t prec) {
  return working_prec(prec) + static_cast<mpfr_prec_t>(max_node) + 32;
}

// Integral over [0,1] from integer-node samples:
//   int_0^1 f = sum_{n=0}^{N} (c_n/n!) Delta^n f(0),
// truncated at the available samples. Exact mode: every operation is exact
// rational arithmetic, and the result is the true integral whenever f is a
// polynomial of degree <= N.
//
// Both machines see only the sampled values: a component that vanishes on
// every integer node (sin(2 pi x) is the classic case) has an identically
// zero difference table and is invisible to the truncated sums.
inline QuadratureResult<Rational> newton_quadrature(const SampledFunction<Rational>& f) {
  const auto& d = f.leading_diffs();
  const std::size_t N = f.max_node();
  CauchyTable cauchy(N);
  Rational sum = 0;
  Rational last = 0;
  for (std::size_t n = 0; n <= N; ++n) {
    last = cauchy.gregory(n) * d[n];
    sum += last;
  }
  bool exact = f.polynomial_degree() && *f.polynomial_degree() <= N;
  return {sum, N + 1, rational_abs(last), exact};
}

// Float mode: Gregory weights from the fixed-point table, compensated
// summation in ascending n at prec + guard bits.
inline QuadratureResult<BigFloat> newton_quadrature(const SampledFunction<BigFloat>& f,
                                                    mpfr_prec_t prec) {
  const mpfr_prec_t wp = working_prec(prec);
  const auto& d = f.leading_diffs();
  const std::size_t N = f.max_node();
  auto mags = gregory_magnitudes(N, wp);
  KahanSum sum(wp);
  BigFloat term(wp);
  for (std::size_t n = 0; n <= N; ++n) {
    term = mags[n] * d[n];
    if (n >= 2 && !(n & 1)) term = -term;  // sign(G_n) = (-1)^(n+1), G_0 = 1
    sum.add(term);
  }
  return {sum.value().rounded(prec), N + 1, term.abs().rounded(prec), false};
}

// Taylor coefficient f^(m)(0)/m! from integer-node samples (the derivative
// machine): sum_{n=m}^{N} s(n,m)/n! * Delta^n f(0). The summand vanishes for
// n < m since s(n,m) = 0 there.
inline Rational newton_derivative(const SampledFunction<Rational>& f, std::size_t m) {
  const std::size_t N = f.max_node();
  if (m > N) throw std::invalid_argument("newton_derivative: order exceeds sample count");
  const auto& d = f.leading_diffs();
  StirlingTriangle tri(StirlingKind::first_signed, N);
  Rational sum = 0;
  BigInt nfact = factorial(m);
  for (std::size_t n = m; n <= N; ++n) {
    if (n > m) nfact *= static_cast<long>(n);
    sum += rational_from(tri.at(n, m), nfact) * d[n];
  }
  return sum;
}

// Float mode: |s(n,m)|/n! is maintained incrementally through the elementary
// symmetric functions of 1, 1/2, ..., 1/(n-1); no factorials are formed.
inline BigFloat newton_derivative(const SampledFunction<BigFloat>& f, std::size_t m,
                                  mpfr_prec_t prec) {
  const std::size_t N = f.max_node();
  if (m > N) throw std::invalid_argument("newton_derivative: order exceeds sample count");
  const auto& d = f.leading_diffs();
  const mpfr_prec_t wp = working_prec(prec);
  KahanSum sum(wp);
  if (m == 0) {
    // s(n,0) = [n == 0]; only the n = 0 term survives
    sum.add(d[0]);
    return sum.value().rounded(prec);
  }
  // e[j] holds e_j(1, 1/2, ..., 1/(n-1)); |s(n,m)| = (n-1)! e_{m-1}
  std::vector<BigFloat> e(m, BigFloat(0, wp));
  e[0] = BigFloat(1, wp);
  for (std::size_t n = 1; n <= N; ++n) {
    if (n >= 2) {
      for (std::size_t j = std::min(m - 1, n - 1); j >= 1; --j)
        e[j] += e[j - 1] / static_cast<long>(n - 1);
    }
    if (n < m) continue;
    BigFloat coeff = e[m - 1] / static_cast<long>(n);  // |s(n,m)|/n!
    if ((n - m) & 1) coeff = -coeff;
    sum.add(coeff * d[n]);
  }
  return sum.value().rounded(prec);
}

// Partial Newton interpolation sum: sum_{n<terms} Delta^n f(0)/n! (z)_n,
// with (z)_n/n! maintained incrementally. Reproduces the nodes exactly in
// rational mode.
template <class T>
T newton_interpolate(const SampledFunction<T>& f, const T& z, std::size_t terms) {
  if (terms == 0 || terms > f.max_node() + 1)
    throw std::invalid_argument("newton_interpolate: bad term count");
  const auto& d = f.leading_diffs();
  T w = detail::value_like(1, z);  // (z)_n / n!
  T acc = d[0] * w;
  for (std::size_t n = 1; n < terms; ++n) {
    w = w * (z - detail::value_like(static_cast<long>(n - 1), z)) /
        detail::value_like(static_cast<long>(n), z);
    acc = acc + d[n] * w;
  }
  return acc;
}

}  // namespace greglab
