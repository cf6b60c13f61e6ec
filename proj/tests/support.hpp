#pragma once

// Shared builders, random generators and brute-force oracles for the tests.
// Nothing here calls into the code paths it is used to check.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "torsion/coset.hpp"
#include "torsion/laurent.hpp"
#include "torsion/solver.hpp"

namespace torsion::testing {

using Term = std::pair<std::int64_t, ExponentVector>;

inline RationalLaurent poly(std::size_t n, const std::vector<Term>& terms) {
  RationalLaurent p(n);
  for (const auto& [c, e] : terms) p.add_term(e, Rational(c));
  return p;
}

inline VarietySystem system(std::size_t n, const std::vector<std::vector<Term>>& polys) {
  std::vector<RationalLaurent> out;
  for (const auto& terms : polys) out.push_back(poly(n, terms));
  return VarietySystem(n, std::move(out));
}

inline std::int64_t naive_gcd(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t naive_totient(std::int64_t n) {
  std::int64_t count = 0;
  for (std::int64_t k = 1; k <= n; ++k) count += naive_gcd(k, n) == 1;
  return count;
}

inline bool is_primitive(const ExponentVector& a, std::int64_t order) {
  std::int64_t g = order;
  for (auto x : a) g = naive_gcd(g, x);
  return g == 1;
}

/// Every vector of (Z/N)^n in lexicographic order.
template <class F>
void for_each_vector(std::int64_t order, std::size_t n, F&& f) {
  ExponentVector a(n, 0);
  while (true) {
    f(a);
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++a[i] < order) break;
      a[i] = 0;
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

/// Lexicographically least orbit elements found by marking whole orbits.
inline std::vector<ExponentVector> brute_orbit_representatives(std::int64_t order, std::size_t n) {
  std::set<ExponentVector> seen;
  std::vector<ExponentVector> reps;
  for_each_vector(order, n, [&](const ExponentVector& a) {
    if (!is_primitive(a, order) || seen.count(a)) return;
    reps.push_back(a);
    for (std::int64_t u = 1; u <= order; ++u) {
      if (naive_gcd(u, order) != 1) continue;
      ExponentVector b(n);
      for (std::size_t i = 0; i < n; ++i) b[i] = (u * a[i]) % order;
      seen.insert(b);
    }
  });
  return reps;
}

/// Numerical value of a rational Laurent polynomial at zeta_N^a.
inline std::complex<double> numeric_value(const RationalLaurent& p, const TorsionPoint& pt) {
  std::complex<double> acc = 0;
  for (const auto& [e, c] : p.terms()) {
    __int128 dot = 0;
    for (std::size_t i = 0; i < e.size(); ++i) dot += static_cast<__int128>(e[i]) * pt.exponents[i];
    auto k = static_cast<std::int64_t>(dot % pt.order);
    const double angle = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(pt.order);
    acc += c.get_d() * std::polar(1.0, angle);
  }
  return acc;
}

/// Numerical value of a cyclotomic element at exp(2 pi i / m).
inline std::complex<double> numeric_value(const CyclotomicElement& z) {
  std::complex<double> acc = 0;
  const auto coeffs = z.coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    acc += coeffs[i].get_d() *
           std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(z.modulus()));
  return acc;
}

/// Sparse random polynomial: `terms` monomials with L1 degree <= max_degree
/// and coefficients drawn from `coeffs`.
inline RationalLaurent random_poly(std::mt19937_64& rng, std::size_t n, int terms, int max_degree,
                                   const std::vector<std::int64_t>& coeffs, bool laurent = true) {
  std::uniform_int_distribution<std::int64_t> exp_dist(laurent ? -max_degree : 0, max_degree);
  std::uniform_int_distribution<std::size_t> coeff_dist(0, coeffs.size() - 1);
  RationalLaurent p(n);
  int guard = 0;
  while (static_cast<int>(p.size()) < terms && guard++ < 1000) {
    ExponentVector e(n);
    std::int64_t l1 = 0;
    for (auto& x : e) {
      x = exp_dist(rng);
      l1 += x < 0 ? -x : x;
    }
    if (l1 > max_degree || p.terms().count(e)) continue;
    p.add_term(e, Rational(coeffs[coeff_dist(rng)]));
  }
  return p;
}

/// Every torsion point of order <= cap that the report accounts for, either
/// listed as isolated or lying on a reported coset.
inline std::set<TorsionPoint> covered_points(const TorsionReport& report, std::size_t n, std::int64_t cap) {
  std::set<TorsionPoint> out;
  for (const auto& pt : report.isolated_points)
    if (pt.order <= cap) out.insert(pt);
  for (std::int64_t order = 1; order <= cap; ++order) {
    for_each_vector(order, n, [&](const ExponentVector& a) {
      if (!is_primitive(a, order)) return;
      TorsionPoint pt{order, a};
      for (const auto& c : report.cosets)
        if (coset_contains_point(c, pt)) {
          out.insert(pt);
          return;
        }
    });
  }
  return out;
}

}  // namespace torsion::testing
