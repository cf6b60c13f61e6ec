#pragma once

// Torsion points and one-dimensional torsion cosets on a subvariety of the
// torus cut out by Laurent polynomials with rational coefficients.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torsion/coset.hpp"
#include "torsion/laurent.hpp"

namespace torsion {

/// A nonempty list of polynomials in the same n variables.
class VarietySystem {
 public:
  VarietySystem(std::size_t n, std::vector<RationalLaurent> polys);

  std::size_t dimension() const { return n_; }
  const std::vector<RationalLaurent>& polys() const { return polys_; }
  /// Largest Laurent total degree among the polynomials.
  std::int64_t max_degree() const { return max_degree_; }

  friend bool operator==(const VarietySystem&, const VarietySystem&) = default;

 private:
  std::size_t n_;
  std::vector<RationalLaurent> polys_;
  std::int64_t max_degree_ = 0;
};

struct TorsionReport {
  std::vector<TorsionPoint> isolated_points;  // full Galois orbits, sorted
  std::vector<TorsionCoset> cosets;           // canonical, sorted, pairwise distinct
  std::int64_t scanned_cap = 0;
  std::optional<std::int64_t> certified_bound;
  bool complete = false;
  bool budget_exceeded = false;
  std::vector<std::string> diagnostics;
};

struct SolveOptions {
  std::optional<std::int64_t> cap_override;
  std::optional<std::int64_t> probe_limit;
  std::uint64_t budget = 10'000'000;  // orbit representatives examined
  unsigned jobs = 1;
  std::int64_t bound_scan_limit = 200'000'000;
};

/// Number of orbits of primitive vectors in (Z/N)^n under the unit group;
/// the action is free, so this is J_n(N) / phi(N).
std::uint64_t orbit_count(std::int64_t order, std::size_t n);

/// Lexicographically least element of every unit-group orbit of primitive
/// vectors in (Z/N)^n, in lexicographic order.
std::vector<ExponentVector> orbit_representatives(std::int64_t order, std::size_t n);

/// All u*a for units u mod N, sorted.
std::vector<TorsionPoint> galois_orbit(const TorsionPoint& pt);

/// Every torsion point of exact order <= cap on V, by exact evaluation at each
/// orbit representative. Orbits are expanded; result is sorted.
std::vector<TorsionPoint> brute_force_torsion(const VarietySystem& system, std::int64_t cap);

/// The torsion coset through pt certified by identically vanishing
/// specializations, or nullopt. Throws PreconditionError if pt is not on V.
std::optional<TorsionCoset> coset_certificate(const VarietySystem& system, const TorsionPoint& pt);

/// Exact check of phi(N) <= 2 * d * N^(1 - 1/(2n)).
bool order_fails_bound(std::int64_t order, std::int64_t degree, std::size_t n);

/// Largest N <= limit with order_fails_bound; the exact scan behind order_bound.
std::int64_t largest_failing_order(std::int64_t degree, std::size_t n, std::int64_t limit);

/// Analytic cutoff X above which phi(N) > 2 d N^(1 - 1/(2n)) is guaranteed by
/// the explicit totient lower bound; evaluated with outward rounding.
std::int64_t bound_scan_cutoff(std::int64_t degree, std::size_t n);

/// M = 1 + max{N : phi(N) <= 2 d_max N^(1-1/(2n))}; nullopt when the scan
/// would exceed scan_limit.
std::optional<std::int64_t> order_bound(const VarietySystem& system,
                                        std::int64_t scan_limit = SolveOptions{}.bound_scan_limit);

TorsionReport solve(const VarietySystem& system, const SolveOptions& options = {});

}  // namespace torsion
