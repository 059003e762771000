#include <doctest.h>

#include <cstdint>
#include <vector>

#include "greglab/numkernel.hpp"
#include "greglab/power_series.hpp"

using namespace greglab;

namespace {

// Deterministic pseudo-random small rationals for property tests.
struct Lcg {
  std::uint64_t s;
  explicit Lcg(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return s >> 33;
  }
  Rational rational() {
    long num = static_cast<long>(next() % 2001) - 1000;
    long den = static_cast<long>(next() % 40) + 1;
    return make_rational(num, den);
  }
};

// Independent oracle: expand z(z-1)...(z-n+1) with a local polynomial
// multiply, no shared code with the library routine.
std::vector<BigInt> expand_falling(std::size_t n) {
  std::vector<BigInt> p{BigInt(1)};
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<BigInt> q(p.size() + 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i + 1] += p[i];
      q[i] -= p[i] * BigInt(static_cast<long>(j));
    }
    p = std::move(q);
  }
  return p;
}

// Brute-force count of partitions of an n-set into exactly k nonempty blocks.
long count_set_partitions(int n, int k) {
  if (n == 0) return k == 0 ? 1 : 0;
  // place elements one at a time; state = number of blocks used
  std::vector<std::vector<long>> memo(n + 1, std::vector<long>(n + 2, -1));
  // f(i, b): ways to place elements i..n-1 given b blocks already open, ending with exactly k
  struct Rec {
    int n, k;
    std::vector<std::vector<long>>& memo;
    long operator()(int i, int b) {
      if (b > k) return 0;
      if (i == n) return b == k ? 1 : 0;
      long& m = memo[i][b];
      if (m >= 0) return m;
      return m = b * (*this)(i + 1, b) + (*this)(i + 1, b + 1);
    }
  } rec{n, k, memo};
  return rec(0, 0);
}

}  // namespace

TEST_CASE("binomial rows match the GMP binomial") {
  BinomialRows rows(40);
  for (unsigned n = 0; n <= 40; n += 7)
    for (unsigned k = 0; k <= n; ++k) {
      BigInt ref;
      mpz_bin_uiui(ref.get_mpz_t(), n, k);
      CHECK(rows.at(n, k) == ref);
    }
  CHECK_THROWS_AS(rows.at(41, 0), std::out_of_range);
}

TEST_CASE("stirling first kind: pinned values and identities") {
  CHECK(stirling_first(0, 0) == 1);
  // oracle: z(z-1)(z-2) = z^3 - 3z^2 + 2z
  auto cubic = expand_falling(3);
  REQUIRE(cubic.size() == 4);
  CHECK(cubic[2] == -3);
  CHECK(stirling_first(3, 2) == cubic[2]);
  // s(5,1) = (-1)^4 * 4! = 24
  CHECK(stirling_first(5, 1) == 24);
  // zero above the diagonal
  CHECK(stirling_first(4, 7) == 0);

  // s(n,1) = (-1)^(n-1) (n-1)!  and  (-1)^n s(n,2) = (n-1)! H_{n-1}
  HarmonicTable ht(30);
  for (std::size_t n = 1; n <= 30; ++n) {
    BigInt expect1 = factorial(n - 1);
    if ((n - 1) & 1) expect1 = -expect1;
    CHECK(stirling_first(n, 1) == expect1);
    if (n >= 1) {
      Rational lhs = Rational(stirling_first(n, 2));
      if (n & 1) lhs = -lhs;
      CHECK(lhs == Rational(factorial(n - 1)) * ht.harmonic(n - 1));
    }
  }

  // row sums vanish: (z)_n at z = 1 is 0 for n >= 2
  std::lock_guard<std::mutex> lock(shared::table_mutex());
  shared::first_kind().ensure(50);
  for (std::size_t n = 2; n <= 50; ++n) {
    BigInt sum = 0;
    for (std::size_t k = 0; k <= n; ++k) sum += shared::first_kind().at(n, k);
    CHECK(sum == 0);
  }
}

TEST_CASE("stirling unsigned view applies the sign flip") {
  CHECK(stirling_first_unsigned(5, 1) == 24);
  CHECK(stirling_first_unsigned(3, 2) == 3);
  StirlingTriangle u(StirlingKind::first_unsigned, 12);
  for (std::size_t n = 0; n <= 12; ++n)
    for (std::size_t k = 0; k <= n; ++k) {
      BigInt s = stirling_first(n, k);
      if ((n - k) & 1) s = -s;
      CHECK(u.at(n, k) == s);
      CHECK(u.at(n, k) >= 0);
    }
}

TEST_CASE("stirling second kind: pinned values, partition oracle, binomial form") {
  CHECK(stirling_second(0, 0) == 1);
  CHECK(stirling_second(3, 3) == 1);
  CHECK(count_set_partitions(4, 2) == 7);
  CHECK(stirling_second(4, 2) == 7);
  for (int n = 0; n <= 9; ++n)
    for (int k = 0; k <= n; ++k) CHECK(stirling_second(n, k) == count_set_partitions(n, k));

  // S(p,n) = (-1)^n / n! * sum_k C(n,k) (-1)^k k^p
  BinomialRows rows(12);
  for (unsigned p = 0; p <= 12; ++p)
    for (unsigned n = 0; n <= p; ++n) {
      BigInt acc = 0;
      for (unsigned k = 0; k <= n; ++k) {
        BigInt t = rows.at(n, k) * bigint_pow(BigInt(k), p);
        if (k == 0) t = (p == 0) ? rows.at(n, 0) : BigInt(0);  // 0^0 = 1
        if (k & 1)
          acc -= t;
        else
          acc += t;
      }
      if (n & 1) acc = -acc;
      Rational q = rational_from(acc, factorial(n));
      CHECK(q.get_den() == 1);
      CHECK(q.get_num() == stirling_second(p, n));
    }
}

TEST_CASE("capacity error when a capped table is pushed past its bound") {
  StirlingTriangle t(StirlingKind::first_signed, 8, 8);
  CHECK(t.at(8, 3) == stirling_first(8, 3));
  CHECK_THROWS_AS(t.ensure(9), std::out_of_range);
  CHECK_THROWS_AS(t.at(9, 0), std::out_of_range);
}

TEST_CASE("cauchy numbers: pinned values and the series-division oracle") {
  CHECK(cauchy_number(0) == 1);
  CHECK(cauchy_number(1) == make_rational(1, 2));
  CHECK(cauchy_number(2) == make_rational(-1, 6));
  CHECK(cauchy_number(3) == make_rational(1, 4));

  auto g = gregory_series(60);
  CHECK(g[0] == 1);
  CHECK(g[1] == make_rational(1, 2));
  CHECK(g[2] == make_rational(-1, 12));
  CHECK(g[3] == make_rational(1, 24));
  // c_4 = 4! * [x^4] x/ln(1+x)
  CHECK(cauchy_number(4) == make_rational(-19, 30));
  CHECK(Rational(factorial(4)) * g[4] == make_rational(-19, 30));

  // two independent oracles agree for all n <= 60
  for (std::size_t n = 0; n <= 60; ++n) {
    CHECK(cauchy_number(n) == Rational(factorial(n)) * g[n]);
    CHECK(gregory_coefficient(n) == g[n]);
  }
}

TEST_CASE("gregory coefficients alternate in sign: sign(c_n/n!) = (-1)^(n+1)") {
  CauchyTable table(200);
  for (std::size_t n = 1; n <= 200; ++n) {
    int expect = (n & 1) ? 1 : -1;
    CHECK(sign_of(table.gregory(n)) == expect);
    CHECK(sign_of(table.value(n)) == expect);
  }
}

TEST_CASE("harmonic family: pinned values and difference invariants") {
  CHECK(harmonic(0) == 0);
  CHECK(harmonic(3) == make_rational(11, 6));
  CHECK(harmonic_p(2, 2) == make_rational(5, 4));
  CHECK(harmonic_p(0, 5) == 0);
  CHECK(skew_harmonic(0) == 0);
  CHECK(skew_harmonic(2) == make_rational(1, 2));
  for (std::size_t n = 1; n <= 40; ++n) {
    CHECK(harmonic(n) - harmonic(n - 1) == make_rational(1, static_cast<long>(n)));
    CHECK(harmonic_p(n, 3) - harmonic_p(n - 1, 3) ==
          rational_from(BigInt(1), bigint_pow(BigInt(static_cast<long>(n)), 3)));
    Rational d = skew_harmonic(n) - skew_harmonic(n - 1);
    CHECK(d == make_rational((n & 1) ? 1 : -1, static_cast<long>(n)));
  }
}

TEST_CASE("series-division oracle agrees with the power-series machinery") {
  // independent route: reciprocal of ln(1+x)/x via PowerSeries division
  const std::size_t M = 40;
  PowerSeries<Rational> reduced_log(M), one(M);
  one[0] = 1;
  for (std::size_t j = 0; j <= M; ++j)
    reduced_log[j] = make_rational((j & 1) ? -1 : 1, static_cast<long>(j + 1));
  auto quotient = one / reduced_log;
  auto direct = gregory_series(M);
  for (std::size_t n = 0; n <= M; ++n) CHECK(quotient[n] == direct[n]);
}

TEST_CASE("harmonic_p rejects p < 1") {
  HarmonicTable t;
  CHECK_THROWS_AS(t.ensure_p(0, 5), std::invalid_argument);
}

TEST_CASE("binomial transform: examples and involution") {
  // constant sequence maps to (1, 0, 0, ...)
  std::vector<Rational> ones(8, Rational(1));
  auto b = binomial_transform(ones);
  CHECK(b[0] == 1);
  for (std::size_t n = 1; n < b.size(); ++n) CHECK(b[n] == 0);

  // harmonic numbers map to -1/n (entry (9.3a))
  std::vector<Rational> h;
  for (std::size_t k = 0; k < 5; ++k) h.push_back(harmonic(k));
  auto bh = binomial_transform(h);
  CHECK(bh[0] == 0);
  for (std::size_t n = 1; n < 5; ++n) CHECK(bh[n] == make_rational(-1, static_cast<long>(n)));

  CHECK_THROWS_AS(binomial_transform({}), std::invalid_argument);

  // exact involution on 200 random sequences of length <= 50
  Lcg rng(20260808);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t len = 1 + rng.next() % 50;
    std::vector<Rational> a;
    a.reserve(len);
    for (std::size_t i = 0; i < len; ++i) a.push_back(rng.rational());
    CHECK(binomial_transform(binomial_transform(a)) == a);
  }
}

TEST_CASE("difference table: examples and the binomial-sum identity") {
  std::vector<Rational> squares{Rational(0), Rational(1), Rational(4), Rational(9)};
  auto lead = leading_differences(squares);
  CHECK(lead == std::vector<Rational>{Rational(0), Rational(1), Rational(2), Rational(0)});

  std::vector<Rational> delta{Rational(1), Rational(0), Rational(0), Rational(0)};
  auto ld = leading_differences(delta);
  for (std::size_t n = 0; n < ld.size(); ++n) CHECK(ld[n] == ((n & 1) ? -1 : 1));

  // Delta^n f(x) = (-1)^n sum_k C(n,k) (-1)^k f(x+k), checked across the
  // whole triangle on random rational samples
  Lcg rng(424242);
  for (int trial = 0; trial < 4; ++trial) {
    std::size_t N = 12 + trial * 9;  // up to 39
    std::vector<Rational> f;
    for (std::size_t i = 0; i <= N; ++i) f.push_back(rng.rational());
    auto table = difference_table(f);
    BinomialRows rows(N);
    for (std::size_t n = 0; n <= N; ++n)
      for (std::size_t x = 0; x + n <= N; x += (n > 2 ? 5 : 1)) {
        Rational acc = 0;
        for (std::size_t k = 0; k <= n; ++k) {
          Rational t = Rational(rows.at(n, k)) * f[x + k];
          if (k & 1)
            acc -= t;
          else
            acc += t;
        }
        if (n & 1) acc = -acc;
        CHECK(table[n][x] == acc);
      }
    // the streaming column agrees with the triangle
    auto col = leading_differences(f);
    for (std::size_t n = 0; n <= N; ++n) CHECK(col[n] == table[n][0]);
  }
}

TEST_CASE("falling factorial coefficients match the first-kind rows") {
  CHECK(falling_factorial_coeffs(0) == std::vector<BigInt>{BigInt(1)});
  auto two = falling_factorial_coeffs(2);
  CHECK(two == std::vector<BigInt>{BigInt(0), BigInt(-1), BigInt(1)});
  for (std::size_t n = 0; n <= 50; ++n) {
    auto coeffs = falling_factorial_coeffs(n);
    auto oracle = expand_falling(n);
    REQUIRE(coeffs.size() == n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      CHECK(coeffs[k] == oracle[k]);
      CHECK(coeffs[k] == stirling_first(n, k));
    }
  }
}

TEST_CASE("inversion pair: 1/(p+1) = sum_n c_n S(p,n) for p <= 30") {
  for (unsigned p = 0; p <= 30; ++p) {
    Rational acc = 0;
    for (unsigned n = 0; n <= p; ++n) acc += cauchy_number(n) * Rational(stirling_second(p, n));
    CHECK(acc == make_rational(1, p + 1));
  }
}
