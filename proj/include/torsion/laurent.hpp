#pragma once

// Sparse Laurent polynomials over Q or over a cyclotomic field, torsion points
// of the torus, and the substitutions that connect them.

#include <compare>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "torsion/cyclotomic.hpp"
#include "torsion/intmat.hpp"
#include "torsion/lattice.hpp"

namespace torsion {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finitely supported map from exponent vectors to nonzero coefficients.
/// Terms are kept in lexicographic exponent order, so equality of
/// polynomials is equality of term maps.
template <class Coeff>
class LaurentPolynomial {
 public:
  using Exponents = ExponentVector;
  using TermMap = std::map<Exponents, Coeff>;

  explicit LaurentPolynomial(std::size_t nvars = 1) : nvars_(nvars) {}

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Adds c * x^e, merging with an existing term and dropping zeros.
  void add_term(Exponents e, const Coeff& c) {
    if (e.size() != nvars_) throw DimensionMismatch("term has wrong number of exponents");
    Coeff value = c;
    normalize(value);
    if (torsion::is_zero(value)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(e), value);
    if (inserted) return;
    it->second += value;
    if (torsion::is_zero(it->second)) terms_.erase(it);
  }

  LaurentPolynomial& operator+=(const LaurentPolynomial& rhs) {
    require_same_nvars(rhs);
    for (const auto& [e, c] : rhs.terms_) add_term(e, c);
    return *this;
  }

  friend LaurentPolynomial operator+(LaurentPolynomial lhs, const LaurentPolynomial& rhs) {
    return lhs += rhs;
  }

  friend LaurentPolynomial operator*(const LaurentPolynomial& lhs, const LaurentPolynomial& rhs) {
    lhs.require_same_nvars(rhs);
    LaurentPolynomial out(lhs.nvars_);
    for (const auto& [e1, c1] : lhs.terms_)
      for (const auto& [e2, c2] : rhs.terms_) {
        Exponents e(e1.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
        out.add_term(std::move(e), c1 * c2);
      }
    return out;
  }

  friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;

  /// Laurent total degree: max over terms of sum_i |e_i|.
  std::int64_t degree() const {
    std::int64_t deg = 0;
    for (const auto& [e, c] : terms_) {
      std::int64_t d = 0;
      for (std::int64_t x : e) d += x < 0 ? -x : x;
      deg = std::max(deg, d);
    }
    return deg;
  }

  /// Max exponent minus min exponent of a univariate polynomial; 0 if zero.
  std::int64_t span() const {
    if (nvars_ != 1) throw DimensionMismatch("span is defined for univariate polynomials");
    if (terms_.empty()) return 0;
    return terms_.rbegin()->first[0] - terms_.begin()->first[0];
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      os << (first ? "" : " + ") << '(' << coeff_string(c) << ')';
      first = false;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] != 0) os << "*x" << i + 1 << '^' << e[i];
      }
    }
    return os.str();
  }

 private:
  static void normalize(Rational& q) { q.canonicalize(); }
  static void normalize(CyclotomicElement&) {}
  static std::string coeff_string(const Rational& q) { return q.get_str(); }
  static std::string coeff_string(const CyclotomicElement& z) { return z.to_string(); }

  void require_same_nvars(const LaurentPolynomial& rhs) const {
    if (rhs.nvars_ != nvars_) throw DimensionMismatch("polynomials live in different numbers of variables");
  }

  std::size_t nvars_;
  TermMap terms_;
};

using RationalLaurent = LaurentPolynomial<Rational>;
using CyclotomicLaurent = LaurentPolynomial<CyclotomicElement>;

/// The point (zeta_N^{a_1}, ..., zeta_N^{a_n}) of exact order N.
struct TorsionPoint {
  std::int64_t order = 1;
  ExponentVector exponents;

  std::size_t dimension() const { return exponents.size(); }
  friend auto operator<=>(const TorsionPoint&, const TorsionPoint&) = default;
  friend bool operator==(const TorsionPoint&, const TorsionPoint&) = default;
};

std::ostream& operator<<(std::ostream& os, const TorsionPoint& pt);

/// Reduces zeta_N^a to exact order: divides N and a by g = gcd(a mod N, N).
TorsionPoint canonicalize(std::int64_t order, std::span<const std::int64_t> exponents);

/// P(pt) as an element of Q(zeta_N).
CyclotomicElement evaluate_at_torsion(const RationalLaurent& poly, const TorsionPoint& pt);

/// p(x) = P(zeta_e^{t_1} x^{c_1}, ..., zeta_e^{t_n} x^{c_n}) over Q(zeta_e).
CyclotomicLaurent specialize(const RationalLaurent& poly, const TorsionDecomposition& dec);

bool is_identically_zero(const CyclotomicLaurent& poly);

/// X_i <- zeta_N^{a_i} * prod_j y_j^{B_ij} for translate zeta_N^a, giving a
/// polynomial in B.cols() variables over Q(zeta_N).
CyclotomicLaurent substitute_monomial_map(const RationalLaurent& poly, const IntMatrix& directions,
                                          const TorsionPoint& translate);

/// Evaluates a univariate polynomial over Q(zeta_e), e | N, at zeta_N^root_exponent.
CyclotomicElement evaluate_at_root_power(const CyclotomicLaurent& poly, std::int64_t modulus,
                                         std::int64_t root_exponent);

}  // namespace torsion
