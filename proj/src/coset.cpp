#include "torsion/coset.hpp"

#include <numeric>
#include <stdexcept>

namespace torsion {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  auto r = static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
  return r < 0 ? r + m : r;
}

// U * v mod m, entries in [0, m).
ExponentVector apply_mod(const IntMatrix& u, std::span<const std::int64_t> v, std::int64_t m) {
  ExponentVector out(u.rows(), 0);
  for (std::size_t i = 0; i < u.rows(); ++i) {
    std::int64_t acc = 0;
    for (std::size_t j = 0; j < u.cols(); ++j) acc = mod(acc + mul_mod(u(i, j), v[j], m), m);
    out[i] = acc;
  }
  return out;
}

void require_dimensions(const TorsionCoset& coset, const TorsionPoint& pt) {
  if (coset.ambient_dimension() != pt.dimension() || coset.translate.dimension() != pt.dimension())
    throw DimensionMismatch("coset and point live in different tori");
}

}  // namespace

IntMatrix saturate_and_canonicalize(const IntMatrix& b) {
  if (b.rows() == 0 || b.cols() == 0 || b.is_zero())
    throw std::invalid_argument("direction matrix must be nonzero");
  const SmithForm snf = smith_normal_form(b);
  // B = left^-1 * D * right^-1, so the first `rank` columns of left^-1 span
  // the saturation.
  IntMatrix basis(b.rows(), snf.rank);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < snf.rank; ++c) basis(r, c) = snf.left_inverse(r, c);
  return column_hermite_form(basis);
}

TorsionCoset make_coset(const TorsionPoint& translate, const IntMatrix& directions) {
  if (directions.rows() != translate.dimension())
    throw DimensionMismatch("translate and directions disagree on the ambient dimension");
  TorsionCoset out;
  out.directions = saturate_and_canonicalize(directions);
  const std::size_t n = directions.rows(), d = out.directions.cols();

  const TorsionPoint g = canonicalize(translate.order, translate.exponents);
  const SmithForm snf = smith_normal_form(out.directions);
  // Rows d.. of `left` are characters trivial on H; they see the class of g.
  const ExponentVector w = apply_mod(snf.left, g.exponents, g.order);
  std::int64_t common = g.order;
  for (std::size_t i = d; i < n; ++i) common = std::gcd(common, w[i]);
  const std::int64_t m = g.order / common;
  if (m == 1) {
    out.translate = TorsionPoint{1, ExponentVector(n, 0)};
    return out;
  }

  ExponentVector quotient(n, 0);
  for (std::size_t i = d; i < n; ++i) quotient[i] = w[i] / common;
  ExponentVector rep = apply_mod(snf.left_inverse, quotient, m);

  // Lexicographically least representative modulo directions + m*Z^n.
  IntMatrix gens(d + n, n);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t r = 0; r < n; ++r) gens(c, r) = out.directions(r, c);
  for (std::size_t i = 0; i < n; ++i) gens(d + i, i) = m;
  const IntMatrix lattice = row_hermite_form(gens);
  for (std::size_t j = 0; j < n; ++j) {
    const std::int64_t q = floor_div(rep[j], lattice(j, j));
    if (q == 0) continue;
    for (std::size_t k = j; k < n; ++k) rep[k] -= q * lattice(j, k);
  }
  out.translate = canonicalize(m, rep);
  if (out.translate.order != m) throw std::logic_error("make_coset: translate lost its minimal order");
  return out;
}

bool coset_contains_point(const TorsionCoset& coset, const TorsionPoint& pt) {
  require_dimensions(coset, pt);
  const std::int64_t modulus = lcm(pt.order, coset.translate.order);
  const std::int64_t s_pt = modulus / pt.order, s_tr = modulus / coset.translate.order;
  ExponentVector delta(pt.dimension());
  for (std::size_t i = 0; i < delta.size(); ++i)
    delta[i] = mod(mul_mod(pt.exponents[i], s_pt, modulus) -
                       mul_mod(coset.translate.exponents[i], s_tr, modulus),
                   modulus);

  // directions * x = delta (mod M)  <=>  D * y = left * delta (mod M).
  const SmithForm snf = smith_normal_form(coset.directions);
  const ExponentVector rhs = apply_mod(snf.left, delta, modulus);
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    if (i < snf.rank) {
      if (rhs[i] % std::gcd(snf.diagonal(i, i), modulus) != 0) return false;
    } else if (rhs[i] != 0) {
      return false;
    }
  }
  return true;
}

bool coset_in_variety(const TorsionCoset& coset, std::span<const RationalLaurent> system) {
  for (const auto& poly : system) {
    if (poly.nvars() != coset.ambient_dimension())
      throw DimensionMismatch("polynomial and coset dimensions differ");
    if (!is_identically_zero(substitute_monomial_map(poly, coset.directions, coset.translate))) return false;
  }
  return true;
}

bool coset_equal(const TorsionCoset& lhs, const TorsionCoset& rhs) {
  if (lhs.ambient_dimension() != rhs.ambient_dimension()) return false;
  const TorsionCoset a{lhs.translate, saturate_and_canonicalize(lhs.directions)};
  const TorsionCoset b{rhs.translate, saturate_and_canonicalize(rhs.directions)};
  if (a.directions != b.directions) return false;
  return coset_contains_point(a, b.translate) && coset_contains_point(b, a.translate);
}

}  // namespace torsion
