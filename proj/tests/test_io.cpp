#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "support.hpp"
#include "torsion/io.hpp"

using namespace torsion;
using namespace torsion::io;
using torsion::testing::random_poly;
using torsion::testing::system;

namespace {

std::string error_of(std::string_view doc) {
  try {
    parse_system(doc);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse_system examples") {
  const auto line = parse_system(
      R"({"n":2,"polynomials":[{"terms":[{"coeff":"1","exps":[1,0]},{"coeff":"1","exps":[0,1]},{"coeff":"-1","exps":[0,0]}]}]})");
  CHECK(line == system(2, {{{1, {1, 0}}, {1, {0, 1}}, {-1, {0, 0}}}}));
  const auto hyp = parse_system(R"({"n":2,"polynomials":[{"terms":[{"coeff":"1","exps":[1,1]},{"coeff":"-1","exps":[0,0]}]}]})");
  CHECK(hyp == system(2, {{{1, {1, 1}}, {-1, {0, 0}}}}));
  const auto dup = error_of(R"({"n":2,"polynomials":[{"terms":[{"coeff":"1","exps":[1,0]},{"coeff":"2","exps":[1,0]}]}]})");
  CHECK(dup.find("duplicate exponent") != std::string::npos);
  CHECK(dup.find("$.polynomials[0].terms[1].exps") != std::string::npos);
}

TEST_CASE("rationals") {
  CHECK(parse_rational(Json("3/6"), "$") == Rational(1, 2));
  CHECK(parse_rational(Json("-4"), "$") == Rational(-4));
  CHECK(parse_rational(Json(7), "$") == Rational(7));
  CHECK(parse_rational(Json("+2/-4"), "$") == Rational(-1, 2));
  CHECK(parse_rational(Json("123456789012345678901234567890/7"), "$") ==
        Rational(Integer("17636684144620811271604938270")));
  CHECK_THROWS_AS(parse_rational(Json("1/0"), "$"), ParseError);
  CHECK_THROWS_AS(parse_rational(Json("1.5"), "$"), ParseError);
  CHECK_THROWS_AS(parse_rational(Json(""), "$"), ParseError);
  CHECK_THROWS_AS(parse_rational(Json(1.5), "$"), ParseError);
  CHECK(format_rational(parse_rational(Json("-3/9"), "$")) == "-1/3");
}

TEST_CASE("validation errors name the field") {
  CHECK(error_of("{").find("byte") != std::string::npos);
  CHECK(error_of(R"({"polynomials":[]})").find("$.n") != std::string::npos);
  CHECK(error_of(R"({"n":0,"polynomials":[]})").find("$.n") != std::string::npos);
  CHECK(error_of(R"({"n":2,"polynomials":[]})").find("$.polynomials") != std::string::npos);
  CHECK(error_of(R"({"n":2,"polynomials":[{"terms":[{"coeff":"1","exps":[1]}]}]})")
            .find("$.polynomials[0].terms[0].exps") != std::string::npos);
  CHECK(error_of(R"({"n":1,"polynomials":[{"terms":[{"coeff":"1","exps":[1.5]}]}]})").find("integers") !=
        std::string::npos);
  CHECK(error_of(R"({"n":1,"polynomials":[{"terms":[{"exps":[1]}]}]})").find("coeff") != std::string::npos);
  CHECK(error_of(R"({"n":1,"polynomials":[{"terms":[{"coeff":"1","exps":[1]}]},{"terms":[]}]})")
            .find("$.polynomials[1]: zero polynomial") != std::string::npos);
  CHECK(error_of(R"({"n":1,"polynomials":[{"terms":[{"coeff":"0","exps":[1]}]}]})").find("zero polynomial") !=
        std::string::npos);
}

TEST_CASE("system round trip") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 3;
    std::vector<RationalLaurent> polys;
    for (int j = 0; j < 1 + trial % 3; ++j) {
      auto p = random_poly(rng, n, 4, 5, {-9, -1, 1, 4});
      p.add_term(ExponentVector(n, 0), Rational(2, 3 + trial));
      polys.push_back(p);
    }
    const VarietySystem sys(n, polys);
    const std::string text = dump(system_to_json(sys));
    const auto back = parse_system(text);
    CHECK(back == sys);
    CHECK(dump(system_to_json(back)) == text);
  }
}

TEST_CASE("report serialization") {
  TorsionReport empty;
  CHECK(dump(report_to_json(empty)) ==
        "{\"isolated_points\":[],\"cosets\":[],\"scanned_cap\":0,\"certified_bound\":null,\"complete\":false}\n");

  const auto hyp = system(2, {{{1, {1, 1}}, {-1, {0, 0}}}});
  SolveOptions opts;
  opts.cap_override = 20;
  const auto r = solve(hyp, opts);
  const Json doc = report_to_json(r);
  CHECK(doc["cosets"].size() == 1);
  CHECK(doc["cosets"][0]["directions"] == Json::parse("[[1],[-1]]"));
  CHECK(doc["cosets"][0]["translate"] == Json::parse(R"({"order":1,"exponents":[0,0]})"));
  CHECK(doc["scanned_cap"] == 20);
  CHECK(doc["complete"] == false);

  const auto line = system(2, {{{1, {1, 0}}, {1, {0, 1}}, {-1, {0, 0}}}});
  const auto a = dump(report_to_json(solve(line, opts)));
  const auto b = dump(report_to_json(solve(line, opts)));
  CHECK(a == b);
  CHECK(a.find(R"("isolated_points":[{"order":6,"exponents":[1,5]},{"order":6,"exponents":[5,1]}])") !=
        std::string::npos);
  const auto text = report_to_text(solve(line, opts));
  CHECK(text.find("isolated torsion points: 2") != std::string::npos);
  CHECK(text.find("torsion cosets: 0") != std::string::npos);
}

TEST_CASE("decomposition serialization") {
  const ExponentVector a{1, 4};
  const auto doc = decomposition_to_json(decompose(a, 17));
  CHECK(doc == Json::parse(R"({"order":17,"k":1,"e":1,"f":1,"c":[1,4],"t":[0,0]})"));
}
