#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_m) and the elementary number
// theory it rests on (totient, factorization, cyclotomic polynomials).

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace torsion {

using Rational = mpq_class;
using Integer = mpz_class;

struct PrimePower {
  std::int64_t prime;
  int exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  std::int64_t value = 1;
  std::vector<PrimePower> factors;  // primes strictly increasing
};

Factorization factorize(std::int64_t n);
std::int64_t totient(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);  // ascending

std::int64_t gcd(std::int64_t a, std::int64_t b);
std::int64_t lcm(std::int64_t a, std::int64_t b);
// Result in [0, m).
std::int64_t mod(std::int64_t a, std::int64_t m);
// Inverse of a modulo m; throws std::domain_error if gcd(a, m) != 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

// Integer coefficients of Phi_m, lowest degree first. Memoized; the cache is
// shared between threads.
std::shared_ptr<const std::vector<Integer>> cyclotomic_polynomial(std::int64_t m);

class ModulusMismatch : public std::invalid_argument {
 public:
  ModulusMismatch(std::int64_t lhs, std::int64_t rhs);
};

/// An element of Q(zeta_m) in the power basis 1, zeta_m, ..., zeta_m^{phi(m)-1}.
///
/// The coefficient vector is the remainder modulo Phi_m, so two elements are
/// equal exactly when their coefficient vectors are equal.
class CyclotomicElement {
 public:
  /// Zero of Q(zeta_m).
  explicit CyclotomicElement(std::int64_t modulus);
  /// The rational constant `value` embedded in Q(zeta_m).
  CyclotomicElement(std::int64_t modulus, const Rational& value);

  /// Reduces an arbitrary-length polynomial in zeta_m modulo Phi_m.
  static CyclotomicElement from_polynomial(std::int64_t modulus,
                                           std::vector<Rational> coeffs);
  /// Builds sum_j dense[j] * zeta_m^j from a length-m vector indexed by exponent.
  static CyclotomicElement from_exponent_sums(std::int64_t modulus,
                                              std::vector<Rational> dense);

  std::int64_t modulus() const { return modulus_; }
  std::span<const Rational> coeffs() const { return coeffs_; }

  bool is_zero() const;
  bool is_rational() const;

  /// Embeds this element into Q(zeta_target); requires modulus() | target.
  CyclotomicElement lift(std::int64_t target) const;

  CyclotomicElement operator-() const;
  CyclotomicElement& operator+=(const CyclotomicElement& rhs);
  CyclotomicElement& operator-=(const CyclotomicElement& rhs);
  CyclotomicElement& operator*=(const CyclotomicElement& rhs);
  CyclotomicElement& operator*=(const Rational& rhs);
  CyclotomicElement pow(std::int64_t exponent) const;  // exponent >= 0

  friend CyclotomicElement operator+(CyclotomicElement lhs, const CyclotomicElement& rhs) {
    return lhs += rhs;
  }
  friend CyclotomicElement operator-(CyclotomicElement lhs, const CyclotomicElement& rhs) {
    return lhs -= rhs;
  }
  friend CyclotomicElement operator*(CyclotomicElement lhs, const CyclotomicElement& rhs) {
    return lhs *= rhs;
  }
  friend CyclotomicElement operator*(CyclotomicElement lhs, const Rational& rhs) {
    return lhs *= rhs;
  }
  friend bool operator==(const CyclotomicElement& a, const CyclotomicElement& b) {
    return a.modulus_ == b.modulus_ && a.coeffs_ == b.coeffs_;
  }

  std::string to_string() const;

 private:
  CyclotomicElement(std::int64_t modulus, std::vector<Rational> reduced, int);
  void require_same_modulus(const CyclotomicElement& rhs) const;

  std::int64_t modulus_;
  std::vector<Rational> coeffs_;
};

std::ostream& operator<<(std::ostream& os, const CyclotomicElement& z);

/// zeta_m^(j mod m), canonically reduced.
CyclotomicElement root_power(std::int64_t m, std::int64_t j);

enum class ArithmeticOp { add, neg, mul };
/// Single entry point for field arithmetic; `rhs` is ignored for `neg` and
/// required otherwise.
CyclotomicElement arithmetic(ArithmeticOp op, const CyclotomicElement& lhs,
                             const CyclotomicElement* rhs = nullptr);

inline bool is_zero(const CyclotomicElement& z) { return z.is_zero(); }
inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace torsion
