#include "torsion/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

#include <gmpxx.h>

#include "torsion/cyclotomic.hpp"

namespace torsion {

namespace {
std::int64_t mod128(__int128 a, std::int64_t m) {
  auto r = static_cast<std::int64_t>(a % m);
  return r < 0 ? r + m : r;
}
}  // namespace

std::int64_t centered_residue(std::int64_t x, std::int64_t modulus) {
  std::int64_t r = mod(x, modulus);
  return 2 * r > modulus ? r - modulus : r;
}

std::int64_t max_norm(std::span<const std::int64_t> v) {
  std::int64_t out = 0;
  for (std::int64_t x : v) out = std::max(out, std::abs(x));
  return out;
}

std::int64_t pigeonhole_radius(std::int64_t modulus, std::size_t n) {
  // Largest r with r^(2n) <= N^(2n-1).
  Integer power;
  mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(modulus),
                static_cast<unsigned long>(2 * n - 1));
  Integer root;
  mpz_root(root.get_mpz_t(), power.get_mpz_t(), static_cast<unsigned long>(2 * n));
  return root.get_si();
}

bool above_pigeonhole_threshold(std::int64_t modulus, std::size_t n) {
  if (2 * n >= 62) return false;
  return modulus >= (std::int64_t{1} << (2 * n)) + 1;
}

namespace {

void require_primitive(std::span<const std::int64_t> a, std::int64_t modulus) {
  if (a.empty()) throw PreconditionError("exponent vector must be nonempty");
  if (modulus < 2) throw PreconditionError("order must be at least 2");
  std::int64_t g = modulus;
  for (std::int64_t x : a) g = std::gcd(g, mod(x, modulus));
  if (g != 1) {
    throw PreconditionError("gcd(a_1, ..., a_n, N) = " + std::to_string(g) +
                            "; canonicalize the point to its exact order first");
  }
}

}  // namespace

ShortMultiple short_multiple(std::span<const std::int64_t> a, std::int64_t modulus) {
  require_primitive(a, modulus);
  const std::size_t n = a.size();
  ExponentVector step(n), acc(n, 0);
  for (std::size_t i = 0; i < n; ++i) step[i] = mod(a[i], modulus);

  ShortMultiple best;
  best.modulus = modulus;
  std::int64_t best_norm = modulus;
  for (std::int64_t k = 1; k < modulus; ++k) {
    std::int64_t norm = 0;
    for (std::size_t i = 0; i < n; ++i) {
      acc[i] += step[i];
      if (acc[i] >= modulus) acc[i] -= modulus;
      std::int64_t r = 2 * acc[i] > modulus ? modulus - acc[i] : acc[i];
      norm = std::max(norm, r);
    }
    if (norm < best_norm) {
      best_norm = norm;
      best.k = k;
      if (norm == 1) break;
    }
  }
  best.b.resize(n);
  for (std::size_t i = 0; i < n; ++i) best.b[i] = centered_residue(mod128(static_cast<__int128>(best.k) * step[i], modulus), modulus);
  best.bound_met = best_norm <= pigeonhole_radius(modulus, n);
  return best;
}

UnitAdjustment unit_adjust(std::int64_t k, std::int64_t modulus) {
  if (modulus < 2) throw PreconditionError("unit_adjust: N must be at least 2");
  if (k < 1) throw PreconditionError("unit_adjust: k must be positive");
  const std::int64_t kr = mod(k, modulus);
  if (kr == 0) throw PreconditionError("unit_adjust: k = 0 mod N has no decomposition");

  const std::int64_t e = std::gcd(kr, modulus);
  const std::int64_t cofactor = kr / e;
  std::int64_t f = 1;
  for (const auto& [p, exponent] : factorize(modulus).factors) {
    if (cofactor % p != 0) f *= p;
  }
  // l = k/e + f*N/e, reduced into [1, N).
  const std::int64_t l = mod128(cofactor + static_cast<__int128>(f) * (modulus / e), modulus);

  if (std::gcd(l, modulus) != 1 || mod128(static_cast<__int128>(l) * e - kr, modulus) != 0) {
    throw std::logic_error("unit_adjust postcondition failed");
  }
  return {e, l};
}

TorsionDecomposition decompose(std::span<const std::int64_t> a, std::int64_t modulus) {
  const ShortMultiple sm = short_multiple(a, modulus);
  const std::size_t n = a.size();

  TorsionDecomposition dec;
  dec.order = modulus;
  dec.k = sm.k;
  const auto [e, l] = unit_adjust(sm.k, modulus);
  dec.e = e;
  dec.f = inverse_mod(l, modulus);
  dec.c.resize(n);
  dec.t.resize(n);
  const std::int64_t step = modulus / e;
  for (std::size_t i = 0; i < n; ++i) {
    if (sm.b[i] % e != 0) throw std::logic_error("decompose: e does not divide b");
    dec.c[i] = sm.b[i] / e;
    const std::int64_t rest =
        mod128(static_cast<__int128>(a[i]) - static_cast<__int128>(dec.f) * dec.c[i], modulus);
    if (rest % step != 0) throw std::logic_error("decompose: residual not a multiple of N/e");
    dec.t[i] = mod(rest / step, e);
  }
  return dec;
}

bool verify_decomposition(const TorsionDecomposition& dec, std::span<const std::int64_t> a) {
  const std::int64_t modulus = dec.order;
  const std::size_t n = a.size();
  if (modulus < 1 || dec.e < 1 || modulus % dec.e != 0) return false;
  if (dec.c.size() != n || dec.t.size() != n) return false;
  if (std::gcd(mod(dec.f, modulus), modulus) != 1) return false;
  const std::int64_t step = modulus / dec.e;
  for (std::size_t i = 0; i < n; ++i) {
    if (dec.t[i] < 0 || dec.t[i] >= dec.e) return false;
    const __int128 rebuilt =
        static_cast<__int128>(dec.f) * dec.c[i] + static_cast<__int128>(step) * dec.t[i];
    if (mod128(rebuilt - a[i], modulus) != 0) return false;
  }
  if (above_pigeonhole_threshold(modulus, n)) {
    const std::int64_t radius = pigeonhole_radius(modulus, n);
    if (dec.e > radius) return false;
    if (static_cast<__int128>(dec.e) * max_norm(dec.c) > radius) return false;
  }
  return true;
}

}  // namespace torsion
