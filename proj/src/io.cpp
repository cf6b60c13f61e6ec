#include "torsion/io.hpp"

#include <iomanip>
#include <set>
#include <sstream>

namespace torsion::io {

namespace {

std::string field(const std::string& parent, const std::string& key) { return parent + "." + key; }
std::string index(const std::string& parent, std::size_t i) { return parent + "[" + std::to_string(i) + "]"; }

const Json& require(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(field(where, key), "missing field");
  return *it;
}

std::string exps_string(const ExponentVector& e) {
  std::string out = "[";
  for (std::size_t i = 0; i < e.size(); ++i) out += (i ? "," : "") + std::to_string(e[i]);
  return out + "]";
}

}  // namespace

Rational parse_rational(const Json& value, const std::string& where) {
  if (value.is_number_integer()) return Rational(Integer(value.dump()));
  if (!value.is_string()) throw ParseError(where, "coefficient must be a string \"p/q\" or an integer");
  const std::string text = value.get<std::string>();
  const auto slash = text.find('/');
  auto parse_int = [&](const std::string& s) {
    const std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
      throw ParseError(where, "malformed rational \"" + text + "\"");
    return Integer(s[0] == '+' ? s.substr(1) : s);
  };
  if (slash == std::string::npos) return Rational(parse_int(text));
  const Integer num = parse_int(text.substr(0, slash));
  const Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ParseError(where, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) { return q.get_str(); }

VarietySystem system_from_json(const Json& doc) {
  const Json& n_field = require(doc, "n", "$");
  if (!n_field.is_number_integer() || n_field.get<std::int64_t>() < 1)
    throw ParseError("$.n", "must be a positive integer");
  const auto n = n_field.get<std::size_t>();
  const Json& polys = require(doc, "polynomials", "$");
  if (!polys.is_array() || polys.empty()) throw ParseError("$.polynomials", "must be a nonempty array");

  std::vector<RationalLaurent> out;
  for (std::size_t j = 0; j < polys.size(); ++j) {
    const std::string pw = index("$.polynomials", j);
    const Json& terms = require(polys[j], "terms", pw);
    if (!terms.is_array()) throw ParseError(field(pw, "terms"), "must be an array");
    RationalLaurent poly(n);
    std::set<ExponentVector> seen;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tw = index(field(pw, "terms"), t);
      const Rational coeff = parse_rational(require(terms[t], "coeff", tw), field(tw, "coeff"));
      const Json& exps = require(terms[t], "exps", tw);
      if (!exps.is_array() || exps.size() != n)
        throw ParseError(field(tw, "exps"), "expected " + std::to_string(n) + " integer exponents");
      ExponentVector e;
      for (const auto& x : exps) {
        if (!x.is_number_integer()) throw ParseError(field(tw, "exps"), "exponents must be integers");
        e.push_back(x.get<std::int64_t>());
      }
      if (!seen.insert(e).second) throw ParseError(field(tw, "exps"), "duplicate exponent " + exps_string(e));
      poly.add_term(std::move(e), coeff);
    }
    if (poly.is_zero()) throw ParseError(pw, "zero polynomial");
    out.push_back(std::move(poly));
  }
  return VarietySystem(n, std::move(out));
}

VarietySystem parse_system(std::string_view document) {
  Json doc;
  try {
    doc = Json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
  return system_from_json(doc);
}

Json system_to_json(const VarietySystem& system) {
  Json polys = Json::array();
  for (const auto& poly : system.polys()) {
    Json terms = Json::array();
    for (const auto& [e, c] : poly.terms()) terms.push_back(Json{{"coeff", format_rational(c)}, {"exps", e}});
    polys.push_back(Json{{"terms", std::move(terms)}});
  }
  return Json{{"n", system.dimension()}, {"polynomials", std::move(polys)}};
}

Json point_to_json(const TorsionPoint& pt) { return Json{{"order", pt.order}, {"exponents", pt.exponents}}; }

Json coset_to_json(const TorsionCoset& coset) {
  return Json{{"translate", point_to_json(coset.translate)}, {"directions", coset.directions.row_list()}};
}

Json decomposition_to_json(const TorsionDecomposition& dec) {
  return Json{{"order", dec.order}, {"k", dec.k}, {"e", dec.e}, {"f", dec.f}, {"c", dec.c}, {"t", dec.t}};
}

Json report_to_json(const TorsionReport& report) {
  Json points = Json::array(), cosets = Json::array();
  for (const auto& pt : report.isolated_points) points.push_back(point_to_json(pt));
  for (const auto& c : report.cosets) cosets.push_back(coset_to_json(c));
  Json out{{"isolated_points", std::move(points)},
           {"cosets", std::move(cosets)},
           {"scanned_cap", report.scanned_cap},
           {"certified_bound", report.certified_bound ? Json(*report.certified_bound) : Json(nullptr)},
           {"complete", report.complete}};
  if (!report.diagnostics.empty()) out["diagnostics"] = report.diagnostics;
  return out;
}

std::string report_to_text(const TorsionReport& report) {
  std::ostringstream os;
  os << "isolated torsion points: " << report.isolated_points.size() << '\n';
  if (!report.isolated_points.empty()) {
    os << "  " << std::setw(8) << "order" << "  exponents\n";
    for (const auto& pt : report.isolated_points)
      os << "  " << std::setw(8) << pt.order << "  " << exps_string(pt.exponents) << '\n';
  }
  os << "torsion cosets: " << report.cosets.size() << '\n';
  for (const auto& c : report.cosets) {
    os << "  translate order " << c.translate.order << " exponents " << exps_string(c.translate.exponents)
       << "  directions";
    for (std::size_t j = 0; j < c.directions.cols(); ++j) os << ' ' << exps_string(c.directions.column(j));
    os << '\n';
  }
  os << "scanned cap: " << report.scanned_cap << '\n';
  os << "certified bound: "
     << (report.certified_bound ? std::to_string(*report.certified_bound) : std::string("none")) << '\n';
  os << "complete: " << (report.complete ? "yes" : "no") << '\n';
  for (const auto& d : report.diagnostics) os << "note: " << d << '\n';
  return os.str();
}

std::string dump(const Json& doc) { return doc.dump() + "\n"; }

}  // namespace torsion::io
