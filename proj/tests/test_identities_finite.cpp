#include <doctest.h>

#include "greglab/identities.hpp"

using namespace greglab;
using namespace greglab::identities;

TEST_CASE("all eleven finite identities verify exactly to n = 100") {
  int count = 0;
  for (const auto& ident : registry()) {
    if (ident.kind != Kind::finite_exact || ident.errata) continue;
    ++count;
    auto res = verify_finite(ident, 100);
    INFO(ident.id, ": ", res.counterexample);
    CHECK(res.pass);
    CHECK(res.cases > 0);
  }
  CHECK(count == 11);
}

TEST_CASE("spec'd spot checks at their stated depths") {
  CHECK(verify_finite("binom-9.3a", 100).pass);
  CHECK(verify_finite("binom-8.43", 60).pass);
  CHECK(verify_finite("binom-ex9", 50).pass);
}

TEST_CASE("the printed Example 9 form is wrong and is reported as such") {
  auto res = verify_finite("binom-ex9-printed", 30);
  CHECK(!res.pass);
  // first counterexample is n = 1: lhs 5/4, rhs 3/4
  CHECK(res.counterexample.find("n=1") != std::string::npos);
  CHECK(res.counterexample.find("5/4") != std::string::npos);
  CHECK(res.counterexample.find("3/4") != std::string::npos);

  const Identity* printed = find("binom-ex9-printed");
  REQUIRE(printed != nullptr);
  CHECK(printed->errata);
}

TEST_CASE("unknown ids and kind misuse raise argument errors") {
  CHECK_THROWS_AS(verify_finite("nonsense", 10), std::invalid_argument);
  CHECK_THROWS_AS(verify_finite("eq10", 10), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_series("binom-9.3a", EvalConfig{}), std::invalid_argument);
}

TEST_CASE("finite reports fit the common schema and carry the verdict") {
  const Identity* ident = find("binom-9.4b");
  REQUIRE(ident != nullptr);
  EvalConfig cfg;
  cfg.n_max = 25;
  auto rep = finite_report(*ident, verify_finite(*ident, cfg.n_max), cfg);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rep.kind == "finite-exact");
  auto j = rep.to_json();
  CHECK(j["id"] == "binom-9.4b");
  CHECK(j["params"]["n_max"] == "25");
  CHECK(j["verdict"] == "pass");
}
