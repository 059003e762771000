// greglab command-line front end: exact number tables, identity verification
// runs, Newton quadrature/derivative experiments, Laguerre tools, and
// reference constants. All numeric output is decimal-string or exact
// rational-string; reports re-serialize byte-identically.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "greglab/constants.hpp"
#include "greglab/identities.hpp"
#include "greglab/laguerre.hpp"
#include "greglab/newtonquad.hpp"
#include "greglab/numkernel.hpp"
#include "greglab/report.hpp"

namespace {

using namespace greglab;
using nlohmann::ordered_json;

struct GlobalOpts {
  long long terms = 10000;
  long prec = 128;
  double tolerance = -1;  // < 0 means unset
  std::string format = "text";
  std::string out;
  std::string id;
  std::string kind;
  long long n_max = 100;
};

identities::EvalConfig to_config(const GlobalOpts& g) {
  identities::EvalConfig cfg;
  cfg.terms = g.terms;
  cfg.prec_bits = g.prec;
  cfg.n_max = g.n_max;
  if (g.tolerance >= 0) cfg.tolerance = g.tolerance;
  return cfg;
}

// Output sink: --out PATH or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0)
    throw std::invalid_argument("cannot parse rational: " + text);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------------------
// numbers

// Exact tables grow quadratically (triangles) or with huge denominators
// (harmonic family); the CLI enforces hard caps where the library would
// happily keep growing.
constexpr long kTriangleCap = 400;
constexpr long kHarmonicCap = 5000;

int cmd_numbers(const GlobalOpts& g, const std::string& family, long n_max, long p_order) {
  Sink sink(g.out);
  std::ostream& os = sink.stream();

  const bool triangle = family == "stirling1" || family == "stirling1u" || family == "stirling2";
  const bool harmonic_family = family == "harmonic" || family == "harmonic-p" || family == "skew";
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  if (triangle || family == "cauchy" || family == "gregory") {
    if (n_max > kTriangleCap)
      throw std::invalid_argument("n_max exceeds the CLI cap of " + std::to_string(kTriangleCap) +
                                  " for family " + family);
  } else if (harmonic_family) {
    if (n_max > kHarmonicCap)
      throw std::invalid_argument("n_max exceeds the CLI cap of " + std::to_string(kHarmonicCap) +
                                  " for family " + family);
  } else {
    throw std::invalid_argument("unknown family: " + family);
  }

  auto emit_scalars = [&](auto value_of) {
    ordered_json arr = ordered_json::array();
    for (long n = 0; n <= n_max; ++n) {
      std::string v = rational_str(value_of(n));
      if (g.format == "json") {
        ordered_json rec;
        rec["n"] = n;
        rec["value"] = v;
        arr.push_back(rec);
      } else if (g.format == "csv") {
        os << n << "," << v << "\n";
      } else {
        os << n << "\t" << v << "\n";
      }
    }
    if (g.format == "json") os << arr.dump() << "\n";
  };

  auto emit_triangle = [&](StirlingKind kind) {
    StirlingTriangle tri(kind, static_cast<std::size_t>(n_max));
    ordered_json arr = ordered_json::array();
    for (long n = 0; n <= n_max; ++n) {
      auto row = tri.row(static_cast<std::size_t>(n));
      if (g.format == "json") {
        ordered_json rec;
        rec["n"] = n;
        ordered_json cells = ordered_json::array();
        for (const auto& c : row) cells.push_back(c.get_str());
        rec["row"] = cells;
        arr.push_back(rec);
      } else {
        const char* sep = g.format == "csv" ? "," : "\t";
        for (std::size_t i = 0; i < row.size(); ++i)
          os << row[i].get_str() << (i + 1 < row.size() ? sep : "");
        os << "\n";
      }
    }
    if (g.format == "json") os << arr.dump() << "\n";
  };

  if (family == "cauchy") {
    CauchyTable table(static_cast<std::size_t>(n_max));
    emit_scalars([&](long n) { return table.value(static_cast<std::size_t>(n)); });
  } else if (family == "gregory") {
    CauchyTable table(static_cast<std::size_t>(n_max));
    emit_scalars([&](long n) { return table.gregory(static_cast<std::size_t>(n)); });
  } else if (family == "harmonic") {
    HarmonicTable table(static_cast<std::size_t>(n_max));
    emit_scalars([&](long n) { return table.harmonic(static_cast<std::size_t>(n)); });
  } else if (family == "harmonic-p") {
    if (p_order < 1) throw std::invalid_argument("harmonic-p needs --p >= 1");
    HarmonicTable table;
    table.ensure_p(static_cast<unsigned>(p_order), static_cast<std::size_t>(n_max));
    emit_scalars([&](long n) {
      return table.harmonic_p(static_cast<std::size_t>(n), static_cast<unsigned>(p_order));
    });
  } else if (family == "skew") {
    HarmonicTable table(static_cast<std::size_t>(n_max));
    emit_scalars([&](long n) { return table.skew(static_cast<std::size_t>(n)); });
  } else if (family == "stirling1") {
    emit_triangle(StirlingKind::first_signed);
  } else if (family == "stirling1u") {
    emit_triangle(StirlingKind::first_unsigned);
  } else if (family == "stirling2") {
    emit_triangle(StirlingKind::second);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify

void emit_reports(const GlobalOpts& g, const std::vector<SeriesReport>& reports) {
  Sink sink(g.out);
  std::ostream& os = sink.stream();
  if (g.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& rep : reports) arr.push_back(rep.to_json());
    os << arr.dump() << "\n";
  } else if (g.format == "csv") {
    os << "id,kind,verdict,N,partial,reference,abs_error,rel_error,tail_estimate\n";
    for (const auto& rep : reports) {
      const std::size_t d = decimal_digits_for(rep.precision_bits);
      os << rep.id << "," << rep.kind << "," << verdict_name(rep.verdict) << "," << rep.terms
         << "," << rep.partial.to_decimal(d) << "," << rep.reference.to_decimal(d) << ","
         << rep.abs_error.to_decimal(d) << "," << rep.rel_error.to_decimal(d) << ","
         << rep.tail_estimate.to_decimal(12) << "\n";
    }
  } else {
    for (const auto& rep : reports) {
      os << rep.id << " [" << rep.kind << "] " << verdict_name(rep.verdict)
         << "  N=" << rep.terms << " partial=" << rep.partial.to_decimal(20)
         << " reference=" << rep.reference.to_decimal(20)
         << " abs_error=" << rep.abs_error.to_decimal(8)
         << " tail=" << rep.tail_estimate.to_decimal(8);
      if (!rep.detail.empty()) os << "  (" << rep.detail << ")";
      os << "\n";
    }
  }
}

int cmd_verify(const GlobalOpts& g) {
  std::string filter = !g.id.empty() ? g.id : (!g.kind.empty() ? g.kind : std::string("all"));
  // a wildcard-free id that matches nothing is a usage error, not an empty run
  if (!g.id.empty() && g.id.find('*') == std::string::npos &&
      identities::find(g.id) == nullptr)
    throw std::invalid_argument("unknown identity id: " + g.id);
  auto result = identities::run_suite(filter, to_config(g));
  emit_reports(g, result.reports);
  return result.aggregate_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// quad / deriv builtins

struct BuiltinSamples {
  std::optional<SampledFunction<Rational>> exact;
  std::optional<SampledFunction<BigFloat>> floating;
  std::optional<Rational> exact_reference;
  std::optional<BigFloat> float_reference;
  std::string describe;
};

constexpr long long kQuadTermsCap = 4000;

BuiltinSamples build_samples(const std::string& builtin, long long N, long p, const Rational& y,
                             long shift, const Rational& x, long prec, int deriv_order) {
  BuiltinSamples out;
  const mpfr_prec_t sp = recommended_sample_prec(static_cast<std::size_t>(N), prec);
  const mpfr_prec_t wp = working_prec(prec);
  if (builtin == "monomial") {
    if (p < 0) throw std::invalid_argument("monomial needs --p >= 0");
    std::vector<Rational> s;
    for (long long k = 0; k <= N; ++k)
      s.emplace_back(bigint_pow(BigInt(static_cast<long>(k)), static_cast<unsigned long>(p)));
    out.exact = SampledFunction<Rational>(std::move(s), "k^p", static_cast<std::size_t>(p));
    if (deriv_order < 0)
      out.exact_reference = make_rational(1, p + 1);
    else
      out.exact_reference = Rational(deriv_order == p ? 1 : 0);
    out.describe = "f(k) = k^" + std::to_string(p);
  } else if (builtin == "rational-shift") {
    if (sgn(y) <= 0) throw std::invalid_argument("rational-shift needs --y > 0");
    std::vector<Rational> s;
    for (long long k = 0; k <= N; ++k) s.push_back(y / (y + Rational(static_cast<long>(k))));
    out.exact = SampledFunction<Rational>(std::move(s), "y/(y+k)");
    if (deriv_order < 0) {
      // int_0^1 y/(y+z) dz = y ln(1 + 1/y)
      BigFloat by = BigFloat::from_rational(y, wp);
      out.float_reference = by * BigFloat::ln((by + BigFloat(1, wp)) / by, wp);
    } else {
      // coefficient of z^m in y/(y+z) is (-1)^m / y^m
      Rational r = 1;
      for (int i = 0; i < deriv_order; ++i) r /= y;
      if (deriv_order & 1) r = -r;
      out.exact_reference = r;
    }
    out.describe = "f(k) = y/(y+k), y = " + rational_str(y);
  } else if (builtin == "inv-square") {
    if (shift < 1) throw std::invalid_argument("inv-square needs --shift (or --m) >= 1");
    std::vector<Rational> s;
    for (long long k = 0; k <= N; ++k)
      s.push_back(
          make_rational(1, (static_cast<long>(k) + shift) * (static_cast<long>(k) + shift)));
    out.exact = SampledFunction<Rational>(std::move(s), "1/(k+m)^2");
    if (deriv_order < 0)
      out.exact_reference = make_rational(1, shift * (shift + 1));  // 1/m - 1/(m+1)
    else {
      Rational r = rational_from(
          BigInt(deriv_order + 1),
          bigint_pow(BigInt(shift), static_cast<unsigned long>(deriv_order + 2)));
      if (deriv_order & 1) r = -r;
      out.exact_reference = r;  // (-1)^m (m+1)/s^(m+2)
    }
    out.describe = "f(k) = 1/(k+" + std::to_string(shift) + ")^2";
  } else if (builtin == "harmonic") {
    std::vector<BigFloat> s;
    BigFloat h(0, sp);
    s.push_back(h);
    for (long long k = 1; k <= N; ++k) {
      h += BigFloat(1, sp) / static_cast<long>(k);
      s.push_back(h);
    }
    out.floating = SampledFunction<BigFloat>(std::move(s), "H_k");
    if (deriv_order < 0)
      out.float_reference = euler_gamma(prec);
    else if (deriv_order == 0)
      out.float_reference = BigFloat(0, prec);
    else {
      BigFloat z = zeta(static_cast<unsigned long>(deriv_order + 1), prec);
      out.float_reference = (deriv_order & 1) ? z : -z;
    }
    out.describe = "f(k) = H_k";
  } else if (builtin == "harmonic2") {
    std::vector<BigFloat> s;
    BigFloat h(0, sp);
    s.push_back(h);
    for (long long k = 1; k <= N; ++k) {
      h += BigFloat(1, sp) / (static_cast<long>(k) * static_cast<long>(k));
      s.push_back(h);
    }
    out.floating = SampledFunction<BigFloat>(std::move(s), "H_k^(2)");
    if (deriv_order < 0)
      out.float_reference = zeta(2, prec) - BigFloat(1, prec);
    else if (deriv_order == 0)
      out.float_reference = BigFloat(0, prec);
    else {
      BigFloat z = zeta(static_cast<unsigned long>(deriv_order + 2), prec) *
                   static_cast<long>(deriv_order + 1);
      out.float_reference = (deriv_order & 1) ? z : -z;
    }
    out.describe = "f(k) = H_k^(2)";
  } else if (builtin == "laguerre-source") {
    if (sgn(x) <= 0) throw std::invalid_argument("laguerre-source needs --x > 0");
    std::vector<BigFloat> s;
    BigFloat bx = BigFloat::from_rational(x, sp);
    BigFloat v(1, sp);
    s.push_back(v);
    for (long long k = 1; k <= N; ++k) {
      v = v * bx / static_cast<long>(k);
      s.push_back(v);
    }
    out.floating = SampledFunction<BigFloat>(std::move(s), "x^k/k!");
    if (deriv_order >= 0) {
      auto c = xz_over_gamma_coeffs(BigFloat::from_rational(x, wp),
                                    static_cast<std::size_t>(deriv_order), prec);
      out.float_reference = c[static_cast<std::size_t>(deriv_order)];
    }
    out.describe = "f(k) = x^k/k!, x = " + rational_str(x);
  } else {
    throw std::invalid_argument("unknown builtin: " + builtin);
  }
  return out;
}

void emit_experiment(const GlobalOpts& g, const std::string& command, const std::string& describe,
                     long long terms, const std::string& value,
                     const std::optional<std::string>& reference,
                     const std::optional<std::string>& abs_error, bool exact) {
  Sink sink(g.out);
  std::ostream& os = sink.stream();
  if (g.format == "json") {
    ordered_json j;
    j["command"] = command;
    j["function"] = describe;
    j["terms"] = terms;
    j["precision_bits"] = g.prec;
    j["value"] = value;
    j["reference"] = reference ? ordered_json(*reference) : ordered_json(nullptr);
    j["abs_error"] = abs_error ? ordered_json(*abs_error) : ordered_json(nullptr);
    j["exact"] = exact;
    os << j.dump() << "\n";
  } else if (g.format == "csv") {
    os << "command,function,terms,value,reference,abs_error,exact\n";
    os << command << ",\"" << describe << "\"," << terms << "," << value << ","
       << (reference ? *reference : "") << "," << (abs_error ? *abs_error : "") << ","
       << (exact ? 1 : 0) << "\n";
  } else {
    os << command << " " << describe << "  terms=" << terms << "\n";
    os << "  value     = " << value << (exact ? "  (exact)" : "") << "\n";
    if (reference) os << "  reference = " << *reference << "\n";
    if (abs_error) os << "  abs_error = " << *abs_error << "\n";
  }
}

struct GivenParams {
  bool p = false, y = false, shift = false, x = false;
};

void require_builtin_params(const std::string& builtin, const GivenParams& given) {
  auto need = [&](bool ok, const char* flag) {
    if (!ok)
      throw std::invalid_argument("builtin " + builtin + " needs its parameter " + flag);
  };
  if (builtin == "monomial") need(given.p, "--p");
  if (builtin == "rational-shift") need(given.y, "--y");
  if (builtin == "inv-square") need(given.shift, "--m/--shift");
  if (builtin == "laguerre-source") need(given.x, "--x");
}

int cmd_quad_or_deriv(const GlobalOpts& g, const std::string& builtin, long p, const Rational& y,
                      long shift, const Rational& x, int deriv_order,
                      const GivenParams& given) {
  require_builtin_params(builtin, given);
  long long N = g.terms;
  if (N > kQuadTermsCap)
    throw std::invalid_argument("terms exceeds the quad/deriv CLI cap of " +
                                std::to_string(kQuadTermsCap));
  const bool is_deriv = deriv_order >= 0;
  auto samples = build_samples(builtin, N, p, y, shift, x, g.prec, deriv_order);
  const std::size_t digits = decimal_digits_for(g.prec);

  std::string value;
  bool exact = false;
  std::optional<std::string> reference, abs_error;
  BigFloat approx(0, working_prec(g.prec));

  if (samples.exact) {
    if (is_deriv) {
      Rational v = newton_derivative(*samples.exact, static_cast<std::size_t>(deriv_order));
      value = rational_str(v);
      exact = samples.exact->polynomial_degree().has_value();
      approx = BigFloat::from_rational(v, working_prec(g.prec));
    } else {
      auto r = newton_quadrature(*samples.exact);
      value = rational_str(r.value);
      exact = r.exact;
      approx = BigFloat::from_rational(r.value, working_prec(g.prec));
    }
  } else {
    if (is_deriv)
      approx =
          newton_derivative(*samples.floating, static_cast<std::size_t>(deriv_order), g.prec);
    else
      approx = newton_quadrature(*samples.floating, g.prec).value;
    value = approx.to_decimal(digits);
  }

  if (samples.exact_reference) {
    reference = rational_str(*samples.exact_reference);
    BigFloat err =
        (approx - BigFloat::from_rational(*samples.exact_reference, working_prec(g.prec))).abs();
    abs_error = err.to_decimal(12);
  } else if (samples.float_reference) {
    reference = samples.float_reference->to_decimal(digits);
    abs_error = (approx - *samples.float_reference).abs().to_decimal(12);
  }
  emit_experiment(g, is_deriv ? "deriv" : "quad", samples.describe, N, value, reference,
                  abs_error, exact);
  return 0;
}

// ---------------------------------------------------------------------------
// laguerre

int cmd_laguerre_eval(const GlobalOpts& g, long n, const Rational& x) {
  if (n < 0) throw std::invalid_argument("laguerre eval needs --n >= 0");
  if (sgn(x) < 0) throw std::invalid_argument("laguerre eval needs --x >= 0");
  Sink sink(g.out);
  std::ostream& os = sink.stream();
  const mpfr_prec_t wp = working_prec(g.prec);
  BigFloat v = laguerre_eval(static_cast<std::size_t>(n), BigFloat::from_rational(x, wp), g.prec);
  const std::size_t digits = decimal_digits_for(g.prec);
  if (g.format == "json") {
    ordered_json j;
    j["n"] = n;
    j["x"] = rational_str(x);
    j["value"] = v.to_decimal(digits);
    os << j.dump() << "\n";
  } else if (g.format == "csv") {
    os << "n,x,value\n" << n << "," << rational_str(x) << "," << v.to_decimal(digits) << "\n";
  } else {
    os << "L_" << n << "(" << rational_str(x) << ") = " << v.to_decimal(digits) << "\n";
  }
  return 0;
}

int cmd_laguerre_series(const GlobalOpts& g, const std::string& id, const Rational& x) {
  auto rep = identities::evaluate_laguerre_series(id, x, to_config(g));
  emit_reports(g, {rep});
  return rep.verdict == Verdict::pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// constants

int cmd_constants(const GlobalOpts& g, const std::vector<std::string>& names) {
  for (const auto& name : names)
    if (!ConstantStore::known(name) || name == "pi")
      throw std::invalid_argument("unknown constant: " + name);
  Sink sink(g.out);
  std::ostream& os = sink.stream();
  const std::size_t digits = decimal_digits_for(g.prec);
  ordered_json arr = ordered_json::array();
  if (g.format == "csv") os << "name,value,precision_bits\n";
  for (const auto& name : names) {
    BigFloat v = ConstantStore::instance().get(name, g.prec);
    if (g.format == "json") {
      ordered_json j;
      j["name"] = name;
      j["value"] = v.to_decimal(digits);
      j["precision_bits"] = g.prec;
      arr.push_back(j);
    } else if (g.format == "csv") {
      os << name << "," << v.to_decimal(digits) << "," << g.prec << "\n";
    } else {
      os << name << " = " << v.to_decimal(digits) << "  (" << g.prec << " bits)\n";
    }
  }
  if (g.format == "json") os << arr.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOpts g;
  CLI::App app{"greglab: exact Cauchy/Stirling/harmonic tables, Newton-series machines, "
               "and a series-identity verification suite"};
  app.require_subcommand(1);
  app.add_option("--terms", g.terms, "series truncation length")
      ->envname("GREGLAB_TERMS")
      ->check(CLI::Range(1LL, 100000000LL));
  app.add_option("--prec", g.prec, "working precision in bits")
      ->envname("GREGLAB_PREC")
      ->check(CLI::Range(32L, 65536L));
  app.add_option("--tolerance", g.tolerance, "absolute tolerance override for verdicts");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--out", g.out, "write output to a file instead of stdout");
  app.add_option("--id", g.id, "identity id or glob, e.g. eq10 or eq1*");
  app.add_option("--kind", g.kind, "identity kind: finite|cauchy|stirling|laguerre|series|errata|all");
  app.add_option("--n-max", g.n_max, "upper index for finite identity checks")
      ->check(CLI::Range(1LL, 2000LL));

  // numbers
  std::string family;
  long table_n = 10;
  long p_order = 0;
  auto* numbers = app.add_subcommand("numbers", "emit an exact number family table");
  numbers->fallthrough();
  numbers
      ->add_option("family", family,
                   "cauchy|gregory|stirling1|stirling1u|stirling2|harmonic|harmonic-p|skew")
      ->required();
  numbers->add_option("n_max", table_n, "highest index")->required();
  numbers->add_option("--p", p_order, "order for harmonic-p");

  // verify
  auto* verify = app.add_subcommand("verify", "run identity verifications and emit reports");
  verify->fallthrough();

  // quad / deriv
  std::string builtin;
  long mono_p = 0;
  std::string y_str = "1";
  long shift = 1;
  std::string x_str = "1";
  int deriv_m = 0;
  auto* quad = app.add_subcommand("quad", "Newton-series quadrature of a builtin sample family");
  quad->fallthrough();
  quad->add_option("builtin", builtin,
                   "monomial|rational-shift|inv-square|harmonic|harmonic2|laguerre-source")
      ->required();
  quad->add_option("--p", mono_p, "monomial degree");
  quad->add_option("--y", y_str, "rational-shift parameter y (rational, e.g. 3/2)");
  quad->add_option("--m,--shift", shift, "inv-square shift m");
  quad->add_option("--x", x_str, "laguerre-source argument x (rational)");

  std::string dbuiltin;
  auto* deriv =
      app.add_subcommand("deriv", "Taylor-coefficient extraction from a builtin sample family");
  deriv->fallthrough();
  deriv
      ->add_option("builtin", dbuiltin,
                   "monomial|rational-shift|inv-square|harmonic|harmonic2|laguerre-source")
      ->required();
  deriv->add_option("--m", deriv_m, "derivative order (coefficient index)")->required();
  deriv->add_option("--p", mono_p, "monomial degree");
  deriv->add_option("--y", y_str, "rational-shift parameter y");
  deriv->add_option("--shift", shift, "inv-square shift");
  deriv->add_option("--x", x_str, "laguerre-source argument x");

  // laguerre
  long lag_n = 0;
  std::string lag_x = "1";
  std::string lag_id = "eq26";
  auto* laguerre = app.add_subcommand("laguerre", "Laguerre polynomial tools");
  laguerre->fallthrough();
  laguerre->require_subcommand(1);
  auto* lag_eval = laguerre->add_subcommand("eval", "evaluate L_n(x)");
  lag_eval->fallthrough();
  lag_eval->add_option("--n", lag_n, "index")->required();
  lag_eval->add_option("--x", lag_x, "argument (rational)")->required();
  auto* lag_series = laguerre->add_subcommand("series", "evaluate a Laguerre series identity");
  lag_series->fallthrough();
  lag_series->add_option("--id", lag_id, "eq26|eq27|eq28 or a full id")->required();
  lag_series->add_option("--x", lag_x, "argument (rational)")->required();

  // constants
  std::vector<std::string> names;
  auto* constants = app.add_subcommand("constants", "emit reference constants");
  constants->fallthrough();
  constants->add_option("names", names, "gamma ln2 zeta2..zeta12 m1")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits 0, every parse problem is usage error 2
  }

  try {
    if (numbers->parsed()) return cmd_numbers(g, family, table_n, p_order);
    if (verify->parsed()) return cmd_verify(g);
    if (quad->parsed()) {
      GivenParams given{quad->count("--p") > 0, quad->count("--y") > 0,
                        quad->count("--m") > 0, quad->count("--x") > 0};
      return cmd_quad_or_deriv(g, builtin, mono_p, parse_rational(y_str), shift,
                               parse_rational(x_str), -1, given);
    }
    if (deriv->parsed()) {
      if (deriv_m < 0) throw std::invalid_argument("deriv needs --m >= 0");
      GivenParams given{deriv->count("--p") > 0, deriv->count("--y") > 0,
                        deriv->count("--shift") > 0, deriv->count("--x") > 0};
      return cmd_quad_or_deriv(g, dbuiltin, mono_p, parse_rational(y_str), shift,
                               parse_rational(x_str), deriv_m, given);
    }
    if (laguerre->parsed()) {
      if (lag_eval->parsed()) return cmd_laguerre_eval(g, lag_n, parse_rational(lag_x));
      return cmd_laguerre_series(g, lag_id, parse_rational(lag_x));
    }
    if (constants->parsed()) return cmd_constants(g, names);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
