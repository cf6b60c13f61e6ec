#include "torsion/laurent.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

namespace torsion {

namespace {

std::int64_t dot_mod(std::span<const std::int64_t> v, std::span<const std::int64_t> a,
                     std::int64_t modulus) {
  __int128 acc = 0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += static_cast<__int128>(v[i]) * a[i];
  auto r = static_cast<std::int64_t>(acc % modulus);
  return r < 0 ? r + modulus : r;
}

std::int64_t dot(std::span<const std::int64_t> v, std::span<const std::int64_t> c) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::int64_t term;
    if (__builtin_mul_overflow(v[i], c[i], &term) || __builtin_add_overflow(acc, term, &acc))
      throw std::overflow_error("exponent overflow during substitution");
  }
  return acc;
}

}  // namespace

std::ostream& operator<<(std::ostream& os, const TorsionPoint& pt) {
  os << "(N=" << pt.order << ", a=(";
  for (std::size_t i = 0; i < pt.exponents.size(); ++i) os << (i ? "," : "") << pt.exponents[i];
  return os << "))";
}

TorsionPoint canonicalize(std::int64_t order, std::span<const std::int64_t> exponents) {
  if (order < 1) throw std::domain_error("canonicalize: order must be positive");
  std::int64_t g = order;
  for (std::int64_t x : exponents) g = std::gcd(g, mod(x, order));
  TorsionPoint pt{order / g, ExponentVector(exponents.size())};
  for (std::size_t i = 0; i < exponents.size(); ++i) pt.exponents[i] = mod(exponents[i], order) / g;
  return pt;
}

CyclotomicElement evaluate_at_torsion(const RationalLaurent& poly, const TorsionPoint& pt) {
  if (poly.nvars() != pt.dimension()) throw DimensionMismatch("polynomial and point dimensions differ");
  std::vector<Rational> dense(static_cast<std::size_t>(pt.order));
  for (const auto& [e, c] : poly.terms()) dense[dot_mod(e, pt.exponents, pt.order)] += c;
  return CyclotomicElement::from_exponent_sums(pt.order, std::move(dense));
}

CyclotomicLaurent specialize(const RationalLaurent& poly, const TorsionDecomposition& dec) {
  if (poly.nvars() != dec.c.size()) throw DimensionMismatch("polynomial and decomposition dimensions differ");
  // x-exponent -> coefficients indexed by the power of zeta_e.
  std::map<std::int64_t, std::vector<Rational>> buckets;
  for (const auto& [e, c] : poly.terms()) {
    auto& dense = buckets[dot(e, dec.c)];
    if (dense.empty()) dense.resize(static_cast<std::size_t>(dec.e));
    dense[dot_mod(e, dec.t, dec.e)] += c;
  }
  CyclotomicLaurent out(1);
  for (auto& [x_exp, dense] : buckets)
    out.add_term({x_exp}, CyclotomicElement::from_exponent_sums(dec.e, std::move(dense)));
  return out;
}

bool is_identically_zero(const CyclotomicLaurent& poly) {
  return std::all_of(poly.terms().begin(), poly.terms().end(),
                     [](const auto& term) { return term.second.is_zero(); });
}

CyclotomicLaurent substitute_monomial_map(const RationalLaurent& poly, const IntMatrix& directions,
                                          const TorsionPoint& translate) {
  if (directions.rows() != poly.nvars() || translate.dimension() != poly.nvars())
    throw DimensionMismatch("monomial map dimensions do not match the polynomial");
  if (directions.cols() == 0) throw DimensionMismatch("monomial map needs at least one direction");
  const IntMatrix transpose = directions.transposed();
  std::map<ExponentVector, std::vector<Rational>> buckets;
  for (const auto& [e, c] : poly.terms()) {
    auto& dense = buckets[transpose * e];
    if (dense.empty()) dense.resize(static_cast<std::size_t>(translate.order));
    dense[dot_mod(e, translate.exponents, translate.order)] += c;
  }
  CyclotomicLaurent out(directions.cols());
  for (auto& [y_exp, dense] : buckets)
    out.add_term(y_exp, CyclotomicElement::from_exponent_sums(translate.order, std::move(dense)));
  return out;
}

CyclotomicElement evaluate_at_root_power(const CyclotomicLaurent& poly, std::int64_t modulus,
                                         std::int64_t root_exponent) {
  if (poly.nvars() != 1) throw DimensionMismatch("evaluate_at_root_power needs a univariate polynomial");
  std::vector<Rational> dense(static_cast<std::size_t>(modulus));
  for (const auto& [e, c] : poly.terms()) {
    if (modulus % c.modulus() != 0) throw ModulusMismatch(c.modulus(), modulus);
    const std::int64_t stride = modulus / c.modulus();
    const std::int64_t shift = mod(static_cast<std::int64_t>(
                                       (static_cast<__int128>(root_exponent) * e[0]) % modulus),
                                   modulus);
    const auto coeffs = c.coeffs();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (sgn(coeffs[i]) == 0) continue;
      dense[mod(static_cast<std::int64_t>(i) * stride + shift, modulus)] += coeffs[i];
    }
  }
  return CyclotomicElement::from_exponent_sums(modulus, std::move(dense));
}

}  // namespace torsion
