#pragma once

// Torsion cosets g*H: a torsion translate g and a saturated direction lattice
// spanning the cocharacters of the subtorus H.

#include <compare>
#include <span>
#include <vector>

#include "torsion/intmat.hpp"
#include "torsion/laurent.hpp"

namespace torsion {

/// Build through make_coset so both fields are canonical; then structural
/// equality coincides with coset_equal.
struct TorsionCoset {
  TorsionPoint translate;
  IntMatrix directions;  // n x d, saturated, column Hermite form

  std::size_t ambient_dimension() const { return directions.rows(); }
  std::size_t dimension() const { return directions.cols(); }

  friend auto operator<=>(const TorsionCoset&, const TorsionCoset&) = default;
  friend bool operator==(const TorsionCoset&, const TorsionCoset&) = default;
};

/// Column Hermite basis of the saturation of the column lattice of b.
/// Throws std::invalid_argument for the zero matrix.
IntMatrix saturate_and_canonicalize(const IntMatrix& b);

/// Canonical coset through `translate` with the given directions. The stored
/// translate is the smallest-order point of the coset, lexicographically
/// least among those.
TorsionCoset make_coset(const TorsionPoint& translate, const IntMatrix& directions);

bool coset_contains_point(const TorsionCoset& coset, const TorsionPoint& pt);

bool coset_in_variety(const TorsionCoset& coset, std::span<const RationalLaurent> system);

bool coset_equal(const TorsionCoset& lhs, const TorsionCoset& rhs);

}  // namespace torsion
