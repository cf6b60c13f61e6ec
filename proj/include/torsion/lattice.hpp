#pragma once

// Short multiples of exponent vectors modulo N and the resulting
// decomposition of a torsion point into an e-th root part and a small-exponent
// power of a new primitive N-th root of unity.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace torsion {

using ExponentVector = std::vector<std::int64_t>;

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Representative of x mod N in (-N/2, N/2].
std::int64_t centered_residue(std::int64_t x, std::int64_t modulus);

std::int64_t max_norm(std::span<const std::int64_t> v);

/// floor(N^(1 - 1/(2n))), computed exactly.
std::int64_t pigeonhole_radius(std::int64_t modulus, std::size_t n);

/// True when N >= 2^(2n) + 1, the range where a short multiple within
/// pigeonhole_radius is guaranteed to exist.
bool above_pigeonhole_threshold(std::int64_t modulus, std::size_t n);

struct ShortMultiple {
  std::int64_t k = 0;
  ExponentVector b;  // centered residues of k*a mod N
  std::int64_t modulus = 0;
  bool bound_met = false;

  std::int64_t norm() const { return max_norm(b); }
};

/// Minimal max-norm nonzero vector among k*a mod N, k in [1, N-1]; the
/// smallest such k wins ties. Throws PreconditionError unless
/// gcd(a_1, ..., a_n, N) = 1.
ShortMultiple short_multiple(std::span<const std::int64_t> a, std::int64_t modulus);

struct UnitAdjustment {
  std::int64_t e = 0;  // gcd(k, N)
  std::int64_t l = 0;  // unit mod N with l*e = k mod N, in [1, N)
};

/// Writes k = l*e mod N with gcd(l, N) = 1 using l = k/e + f*N/e where f is
/// the product of the primes dividing N but not k/e.
UnitAdjustment unit_adjust(std::int64_t k, std::int64_t modulus);

/// Data of a_i = f*c_i + (N/e)*t_i (mod N): the point zeta^a equals
/// (zeta_e^{t_i} * (zeta^f)^{c_i})_i with zeta_e = zeta^(N/e).
struct TorsionDecomposition {
  std::int64_t order = 0;  // N
  std::int64_t e = 0;
  std::int64_t f = 0;      // exponent of the new primitive root zeta^f
  ExponentVector c;        // small exponents
  ExponentVector t;        // e-th root exponents, in [0, e)
  std::int64_t k = 0;      // multiplier of the underlying short multiple
};

TorsionDecomposition decompose(std::span<const std::int64_t> a, std::int64_t modulus);

/// Checks every decomposition invariant against `a` with integer arithmetic.
bool verify_decomposition(const TorsionDecomposition& dec, std::span<const std::int64_t> a);

}  // namespace torsion
