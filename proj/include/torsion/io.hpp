#pragma once

// JSON documents for polynomial systems and solver reports.

#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "torsion/solver.hpp"

namespace torsion::io {

using Json = nlohmann::ordered_json;

/// Schema or validation failure; `where` names the offending field.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Parses "p/q" or an integer (JSON string or number).
Rational parse_rational(const Json& value, const std::string& where);
std::string format_rational(const Rational& q);

/// {"n": 2, "polynomials": [{"terms": [{"coeff": "1", "exps": [1, 0]}, ...]}]}
VarietySystem parse_system(std::string_view document);
VarietySystem system_from_json(const Json& doc);
Json system_to_json(const VarietySystem& system);

Json point_to_json(const TorsionPoint& pt);
Json coset_to_json(const TorsionCoset& coset);
Json decomposition_to_json(const TorsionDecomposition& dec);
Json report_to_json(const TorsionReport& report);

std::string report_to_text(const TorsionReport& report);

/// Serialized JSON with a trailing newline.
std::string dump(const Json& doc);

}  // namespace torsion::io
