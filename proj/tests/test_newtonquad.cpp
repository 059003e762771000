#include <doctest.h>

#include <cstdint>
#include <vector>

#include "greglab/constants.hpp"
#include "greglab/newtonquad.hpp"

using namespace greglab;

namespace {

struct Lcg {
  std::uint64_t s;
  explicit Lcg(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return s >> 33;
  }
  Rational rational() {
    long num = static_cast<long>(next() % 201) - 100;
    long den = static_cast<long>(next() % 12) + 1;
    return make_rational(num, den);
  }
};

SampledFunction<Rational> monomial_samples(unsigned p, std::size_t N) {
  std::vector<Rational> s;
  for (std::size_t k = 0; k <= N; ++k) s.emplace_back(bigint_pow(BigInt(static_cast<long>(k)), p));
  return SampledFunction<Rational>(std::move(s), "k^p", p);
}

// Float samples must absorb the 2^N loss of the difference cascade, so they
// are built at recommended_sample_prec.
SampledFunction<BigFloat> harmonic_samples(std::size_t N, mpfr_prec_t user_prec) {
  const mpfr_prec_t sp = recommended_sample_prec(N, user_prec);
  std::vector<BigFloat> s;
  s.reserve(N + 1);
  BigFloat h(0, sp);
  s.push_back(h);
  for (std::size_t k = 1; k <= N; ++k) {
    h += BigFloat(1, sp) / static_cast<long>(k);
    s.push_back(h);
  }
  return SampledFunction<BigFloat>(std::move(s), "H_k");
}

}  // namespace

TEST_CASE("quadrature of a constant is exactly 1") {
  for (std::size_t N : {0, 1, 5, 17}) {
    std::vector<Rational> s(N + 1, Rational(1));
    auto r = newton_quadrature(SampledFunction<Rational>(std::move(s), "1", 0));
    CHECK(r.value == 1);
    CHECK(r.exact);
  }
}

TEST_CASE("quadrature exactness: f(k) = k^p with N = p gives 1/(p+1), p <= 25") {
  for (unsigned p = 0; p <= 25; ++p) {
    auto r = newton_quadrature(monomial_samples(p, p));
    CHECK(r.value == make_rational(1, p + 1));
    CHECK(r.exact);
    CHECK(r.terms_used == p + 1);
  }
}

TEST_CASE("quadrature of f(k) = 1/(1+k) at N = 40 approaches ln 2") {
  std::vector<Rational> s;
  for (long k = 0; k <= 40; ++k) s.push_back(make_rational(1, 1 + k));
  auto r = newton_quadrature(SampledFunction<Rational>(std::move(s), "1/(1+k)"));
  const mpfr_prec_t P = 128;
  BigFloat val = BigFloat::from_rational(r.value, P);
  BigFloat err = (val - BigFloat::ln2(P)).abs();
  // true truncation error at N = 40 is 7.39e-4, of order 1/(N ln^2 N); the
  // final term is ~2.4e-5, so the error is ~N times the next term, not
  // within it
  CHECK(err < BigFloat::from_double(1e-3, 64));
  CHECK(err > BigFloat::from_double(5e-4, 64));
  // the partial sums of sum (-1)^n c_n/(n+1)! sit above ln 2
  CHECK(val > BigFloat::ln2(P));
}

TEST_CASE("float quadrature of harmonic samples approaches euler gamma") {
  const mpfr_prec_t P = 128;
  auto f = harmonic_samples(600, P);
  auto r = newton_quadrature(f, P);
  BigFloat err = (r.value - euler_gamma(P)).abs();
  // tail model 1/(N ln^2 N) at N = 600 is ~4e-5
  CHECK(err < BigFloat::from_double(4e-4, 64));
}

TEST_CASE("quadrature linearity over random rational samples") {
  Lcg rng(5150);
  const std::size_t N = 18;
  std::vector<Rational> a, b;
  for (std::size_t i = 0; i <= N; ++i) {
    a.push_back(rng.rational());
    b.push_back(rng.rational());
  }
  Rational alpha = make_rational(3, 7), beta = make_rational(-5, 2);
  std::vector<Rational> combo(N + 1);
  for (std::size_t i = 0; i <= N; ++i) combo[i] = alpha * a[i] + beta * b[i];
  auto ra = newton_quadrature(SampledFunction<Rational>(a));
  auto rb = newton_quadrature(SampledFunction<Rational>(b));
  auto rc = newton_quadrature(SampledFunction<Rational>(combo));
  CHECK(rc.value == alpha * ra.value + beta * rb.value);
}

TEST_CASE("derivative machine: exact Taylor coefficients of polynomials") {
  // f(z) = (2z-1)(z-3) = 2z^2 - 7z + 3 sampled at 0..6
  std::vector<Rational> s;
  for (long k = 0; k <= 6; ++k) s.push_back(Rational(2 * k * k - 7 * k + 3));
  SampledFunction<Rational> f(std::move(s), "2z^2-7z+3", 2);
  CHECK(newton_derivative(f, 0) == 3);
  CHECK(newton_derivative(f, 1) == -7);
  CHECK(newton_derivative(f, 2) == 2);
  CHECK(newton_derivative(f, 3) == 0);
  CHECK_THROWS_AS(newton_derivative(f, 7), std::invalid_argument);

  // linearity over random samples
  Lcg rng(31337);
  const std::size_t N = 14;
  std::vector<Rational> a, b, combo(N + 1);
  for (std::size_t i = 0; i <= N; ++i) {
    a.push_back(rng.rational());
    b.push_back(rng.rational());
    combo[i] = a[i] * make_rational(1, 3) + b[i] * Rational(4);
  }
  for (std::size_t m : {1, 2, 5}) {
    Rational lhs = newton_derivative(SampledFunction<Rational>(combo), m);
    Rational rhs = make_rational(1, 3) * newton_derivative(SampledFunction<Rational>(a), m) +
                   Rational(4) * newton_derivative(SampledFunction<Rational>(b), m);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("derivative consistency: m = 0 returns f(0) exactly at any N") {
  for (std::size_t N : {3, 10, 25}) {
    std::vector<Rational> s;
    for (long k = 0; k <= static_cast<long>(N); ++k)
      s.push_back(make_rational(1, (k + 1) * (k + 1)));
    CHECK(newton_derivative(SampledFunction<Rational>(std::move(s)), 0) == 1);
  }
  const mpfr_prec_t P = 96;
  std::vector<BigFloat> fs;
  for (long k = 0; k <= 12; ++k)
    fs.push_back(BigFloat::from_rational(make_rational(1, (k + 1) * (k + 1)), working_prec(P)));
  BigFloat v = newton_derivative(SampledFunction<BigFloat>(std::move(fs)), 0, P);
  CHECK(v == BigFloat(1, P));
}

TEST_CASE("derivative machine on harmonic samples converges to zeta(2) from below") {
  const mpfr_prec_t P = 128;
  auto f = harmonic_samples(2000, P);
  // partial sums are sum 1/n^2: increasing, positive
  BigFloat v500 = newton_derivative(harmonic_samples(500, P), 1, P);
  BigFloat v2000 = newton_derivative(f, 1, P);
  BigFloat z2 = zeta(2, P);
  CHECK(v500 < v2000);
  CHECK(v2000 < z2);
  CHECK((v2000 - z2).abs() < BigFloat::from_double(6e-4, 64));  // tail ~ 1/N
  CHECK((v2000 - z2).abs() > BigFloat::from_double(2e-4, 64));
}

TEST_CASE("derivative machine on x^k/k! samples at x=1 approaches gamma") {
  const mpfr_prec_t P = 128;
  const std::size_t N = 5000;
  const mpfr_prec_t sp = recommended_sample_prec(N, P);
  std::vector<BigFloat> s;
  s.reserve(N + 1);
  BigFloat v(1, sp);
  s.push_back(v);
  for (std::size_t k = 1; k <= N; ++k) {
    v = v / static_cast<long>(k);
    s.push_back(v);
  }
  BigFloat d1 = newton_derivative(SampledFunction<BigFloat>(std::move(s)), 1, P);
  // f'(0) = ln x + gamma = gamma at x = 1; oscillating error ~ N^(-3/4)
  CHECK((d1 - euler_gamma(P)).abs() < BigFloat::from_double(5e-3, 64));
}

TEST_CASE("interpolation reproduces nodes exactly in rational mode") {
  Lcg rng(8888);
  std::vector<Rational> s;
  for (int i = 0; i <= 12; ++i) s.push_back(rng.rational());
  SampledFunction<Rational> f(s);
  for (long j = 0; j <= 12; ++j)
    CHECK(newton_interpolate(f, Rational(j), 13) == s[static_cast<std::size_t>(j)]);
}

TEST_CASE("interpolation rejects zero or oversized term counts") {
  std::vector<Rational> s{Rational(1), Rational(2), Rational(3)};
  SampledFunction<Rational> f(s);
  CHECK_THROWS_AS(newton_interpolate(f, Rational(1), 0), std::invalid_argument);
  CHECK_THROWS_AS(newton_interpolate(f, Rational(1), 4), std::invalid_argument);
  CHECK(newton_interpolate(f, Rational(1), 3) == 2);
}

TEST_CASE("interpolation of k^2 at z = 2.5 with three terms gives 6.25") {
  std::vector<Rational> s{Rational(0), Rational(1), Rational(4), Rational(9)};
  SampledFunction<Rational> f(s);
  CHECK(newton_interpolate(f, make_rational(5, 2), 3) == make_rational(25, 4));
}

TEST_CASE("interpolation of 1/(k+1) at z = 0.5 converges to 2/3") {
  // The terms decay like n^(-5/2) with constant sign, so the truncation
  // error after n terms is ~0.17 n^(-3/2): about 3.6e-4 at 60 terms and
  // below 1e-6 only near n ~ 3200.
  const mpfr_prec_t P = 128;
  const std::size_t N = 3600;
  const mpfr_prec_t sp = recommended_sample_prec(N, P);
  std::vector<BigFloat> s;
  for (long k = 0; k <= static_cast<long>(N); ++k)
    s.push_back(BigFloat::from_rational(make_rational(1, k + 1), sp));
  SampledFunction<BigFloat> f(std::move(s));
  BigFloat z = BigFloat::from_rational(make_rational(1, 2), sp);
  BigFloat target = BigFloat::from_rational(make_rational(2, 3), sp);

  BigFloat v60 = newton_interpolate(f, z, 60);
  CHECK((v60 - target).abs() < BigFloat::from_double(6e-4, 64));
  CHECK((v60 - target).abs() > BigFloat::from_double(1e-4, 64));

  BigFloat vfull = newton_interpolate(f, z, N + 1);
  CHECK((vfull - target).abs() < BigFloat::from_double(1e-6, 64));
}
