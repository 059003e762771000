#pragma once

#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "greglab/bigfloat.hpp"

namespace greglab {

enum class Verdict { pass, fail, inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "fail";
}

// Digits carried by serialized decimal strings at a given binary precision.
inline std::size_t decimal_digits_for(long prec_bits) {
  auto d = static_cast<std::size_t>(static_cast<double>(prec_bits) * 0.30103) + 2;
  return d < 10 ? 10 : d;
}

struct SeriesReport {
  std::string id;
  std::string kind;
  std::vector<std::pair<std::string, std::string>> params;  // insertion-ordered
  long long terms = 0;
  long precision_bits = 0;
  BigFloat partial;
  BigFloat last_term;
  BigFloat tail_estimate;
  BigFloat reference;
  BigFloat abs_error;
  BigFloat rel_error;
  Verdict verdict = Verdict::fail;
  std::string detail;  // human-readable context (text output only, not JSON)

  // Canonical field order, numerics as decimal strings only: serializing,
  // parsing, and re-serializing is byte-identical.
  nlohmann::ordered_json to_json() const {
    const std::size_t digits = decimal_digits_for(precision_bits);
    nlohmann::ordered_json j;
    j["id"] = id;
    j["kind"] = kind;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [key, value] : params) p[key] = value;
    j["params"] = p;
    j["N"] = terms;
    j["precision_bits"] = precision_bits;
    j["partial"] = partial.to_decimal(digits);
    j["last_term"] = last_term.to_decimal(digits);
    j["tail_estimate"] = tail_estimate.to_decimal(digits);
    j["reference"] = reference.to_decimal(digits);
    j["abs_error"] = abs_error.to_decimal(digits);
    j["rel_error"] = rel_error.to_decimal(digits);
    j["verdict"] = verdict_name(verdict);
    return j;
  }
};

}  // namespace greglab
