// End-to-end tests driving the built binary. The test runner sets
// GREGLAB_BIN to the CLI path.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <regex>
#include <sstream>
#include <string>

namespace {

std::string bin_path() {
  const char* b = std::getenv("GREGLAB_BIN");
  REQUIRE(b != nullptr);
  return b;
}

struct RunResult {
  int code;
  std::string out;
};

RunResult run(const std::string& args, const std::string& env_prefix = {}) {
  static int counter = 0;
  std::string outfile = "/tmp/greglab_cli_" + std::to_string(++counter) + ".out";
  std::string cmd = env_prefix + bin_path() + " " + args + " > " + outfile + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  std::ifstream in(outfile);
  std::stringstream ss;
  ss << in.rdbuf();
  std::remove(outfile.c_str());
  return {WEXITSTATUS(rc), ss.str()};
}

}  // namespace

TEST_CASE("numbers: pinned tables in csv") {
  auto cauchy = run("numbers cauchy 3 --format csv");
  CHECK(cauchy.code == 0);
  CHECK(cauchy.out == "0,1\n1,1/2\n2,-1/6\n3,1/4\n");

  auto stirling = run("numbers stirling1 3 --format csv");
  CHECK(stirling.out == "1\n0,1\n0,-1,1\n0,2,-3,1\n");

  auto harmonic = run("numbers harmonic 3 --format csv");
  CHECK(harmonic.out == "0,0\n1,1\n2,3/2\n3,11/6\n");

  auto skew = run("numbers skew 2 --format csv");
  CHECK(skew.out == "0,0\n1,1\n2,1/2\n");

  auto hp = run("numbers harmonic-p 2 --p 2 --format csv");
  CHECK(hp.out == "0,0\n1,1\n2,5/4\n");

  auto gregory = run("numbers gregory 3 --format csv");
  CHECK(gregory.out == "0,1\n1,1/2\n2,-1/12\n3,1/24\n");

  auto unsigned_rows = run("numbers stirling1u 3 --format csv");
  CHECK(unsigned_rows.out == "1\n0,1\n0,1,1\n0,2,3,1\n");

  auto second = run("numbers stirling2 3 --format csv");
  CHECK(second.out == "1\n0,1\n0,1,1\n0,1,3,1\n");
}

TEST_CASE("numbers: csv cells obey the rational grammar") {
  const std::regex cell_re(R"(-?\d+(/\d+)?)");
  for (const char* family : {"cauchy", "gregory", "stirling1", "stirling2", "harmonic"}) {
    auto res = run(std::string("numbers ") + family + " 12 --format csv");
    REQUIRE(res.code == 0);
    std::stringstream lines(res.out);
    std::string line;
    while (std::getline(lines, line)) {
      std::stringstream cells(line);
      std::string cell;
      while (std::getline(cells, cell, ',')) {
        INFO(family, " cell: ", cell);
        CHECK(std::regex_match(cell, cell_re));
      }
    }
  }
}

TEST_CASE("numbers: unknown family and capacity overruns are usage errors") {
  CHECK(run("numbers bogus 5").code == 2);
  CHECK(run("numbers cauchy 100000").code == 2);
  CHECK(run("numbers harmonic-p 5").code == 2);  // missing --p
}

TEST_CASE("verify: finite suite passes; exit codes reflect verdicts") {
  CHECK(run("verify --kind finite --n-max 60").code == 0);
  CHECK(run("verify --id nonsense").code == 2);
  CHECK(run("verify --id 'zzz*'").code == 0);  // empty glob match: vacuous pass
  CHECK(run("verify --id eq22-printed-k0m1 --terms 50").code == 1);
}

TEST_CASE("verify: json reports parse, pass, and round-trip byte-identically") {
  auto res = run("verify --id eq10 --terms 2000 --prec 96 --format json");
  CHECK(res.code == 0);
  auto arr = nlohmann::ordered_json::parse(res.out);
  REQUIRE(arr.is_array());
  REQUIRE(arr.size() == 1);
  CHECK(arr[0]["id"] == "eq10");
  CHECK(arr[0]["verdict"] == "pass");
  CHECK(arr[0]["N"] == 2000);
  CHECK(arr[0]["precision_bits"] == 96);
  // round trip: parse + dump reproduces the emitted bytes
  CHECK(arr.dump() + "\n" == res.out);
}

TEST_CASE("verify: config precedence is flags over environment over defaults") {
  auto env_only = run("verify --id eq10 --format json", "GREGLAB_TERMS=500 ");
  auto flag_beats_env = run("verify --id eq10 --terms 800 --format json", "GREGLAB_TERMS=500 ");
  CHECK(nlohmann::ordered_json::parse(env_only.out)[0]["N"] == 500);
  CHECK(nlohmann::ordered_json::parse(flag_beats_env.out)[0]["N"] == 800);
}

TEST_CASE("quad and deriv: pinned experiments") {
  auto mono = run("quad monomial --p 7 --terms 7");
  CHECK(mono.code == 0);
  CHECK(mono.out.find("1/8") != std::string::npos);
  CHECK(mono.out.find("(exact)") != std::string::npos);

  auto ln2 = run("quad rational-shift --y 1 --terms 40 --format json");
  auto j = nlohmann::ordered_json::parse(ln2.out);
  double err = std::stod(j["abs_error"].get<std::string>());
  CHECK(err < 1e-3);
  CHECK(err > 5e-4);

  auto z2 = run("deriv harmonic --m 1 --terms 1000 --format json");
  auto jz = nlohmann::ordered_json::parse(z2.out);
  CHECK(std::stod(jz["abs_error"].get<std::string>()) < 2e-3);
  CHECK(jz["reference"].get<std::string>().substr(0, 6) == "1.6449");

  CHECK(run("quad bogus").code == 2);
  CHECK(run("quad monomial --terms 5").code == 2);        // --p missing
  CHECK(run("quad rational-shift --terms 5").code == 2);  // --y missing
  CHECK(run("quad inv-square --terms 5").code == 2);      // --m missing
  CHECK(run("deriv laguerre-source --m 1 --terms 5").code == 2);  // --x missing
  CHECK(run("quad laguerre-source --x 0").code == 2);       // missing parameter domain
  CHECK(run("quad monomial --p 7 --terms 100000").code == 2);  // CLI cap
}

TEST_CASE("laguerre subcommands") {
  auto ev = run("laguerre eval --n 2 --x 2 --prec 64");
  CHECK(ev.code == 0);
  CHECK(ev.out.find("-1.0000") != std::string::npos);
  auto series = run("laguerre series --id eq26 --x 1 --terms 4000");
  CHECK(series.code == 0);
  CHECK(run("laguerre series --id eq99 --x 1").code == 2);
}

TEST_CASE("constants: values, precision tagging, unknown name") {
  auto res = run("constants gamma ln2 zeta2 zeta12 m1 --prec 64 --format json");
  REQUIRE(res.code == 0);
  auto arr = nlohmann::ordered_json::parse(res.out);
  REQUIRE(arr.size() == 5);
  CHECK(arr[0]["value"].get<std::string>().substr(0, 7) == "5.77215");
  CHECK(arr[1]["value"].get<std::string>().substr(0, 7) == "6.93147");
  CHECK(arr[2]["value"].get<std::string>().substr(0, 7) == "1.64493");
  CHECK(arr[4]["value"].get<std::string>().substr(0, 7) == "8.60620");
  for (const auto& item : arr) CHECK(item["precision_bits"] == 64);
  CHECK(run("constants bogus").code == 2);
  CHECK(run("constants zeta1").code == 2);
}

TEST_CASE("tolerance override changes verdicts; errata kind is exposed") {
  // the printed eq22 form misses its reference by exactly 1; a tolerance of
  // 2 turns that into a pass, demonstrating the override plumbing
  CHECK(run("verify --id eq22-printed-k0m1 --terms 50").code == 1);
  CHECK(run("verify --id eq22-printed-k0m1 --terms 50 --tolerance 2").code == 0);
  auto errata = run("verify --kind errata --terms 4000 --n-max 20 --format json");
  CHECK(errata.code == 1);
  auto arr = nlohmann::ordered_json::parse(errata.out);
  CHECK(arr.size() == 3);
  for (const auto& item : arr) CHECK(item["verdict"] == "fail");
}

TEST_CASE("two identical runs emit byte-identical reports") {
  const std::string args = "verify --id 'eq2*' --terms 1500 --prec 128 --format json";
  auto a = run(args);
  auto b = run(args);
  CHECK(a.code == b.code);
  CHECK(!a.out.empty());
  CHECK(a.out == b.out);
}

TEST_CASE("--out writes the report to a file") {
  std::string path = "/tmp/greglab_cli_outfile.json";
  auto res = run("verify --id eq20-k0 --terms 10 --format json --out " + path);
  CHECK(res.code == 0);
  CHECK(res.out.empty());
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(nlohmann::ordered_json::parse(ss.str())[0]["id"] == "eq20-k0");
  std::remove(path.c_str());
}
