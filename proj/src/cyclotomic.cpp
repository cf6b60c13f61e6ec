#include "torsion/cyclotomic.hpp"

#include <algorithm>
#include <cassert>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace torsion {

std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t lcm(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  std::int64_t g = std::gcd(a, b);
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a / g, b, &out)) throw std::overflow_error("lcm overflows int64");
  return out < 0 ? -out : out;
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t old_r = mod(a, m), r = m;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
  }
  if (old_r != 1) throw std::domain_error("element is not a unit modulo " + std::to_string(m));
  return mod(old_s, m);
}

namespace {

// Primes up to 1000; enough to finish trial division of any n < 10^6.
const std::vector<std::int64_t>& small_primes() {
  static const std::vector<std::int64_t> primes = [] {
    constexpr int limit = 1000;
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::int64_t> out;
    for (int p = 2; p <= limit; ++p) {
      if (composite[p]) continue;
      out.push_back(p);
      for (int q = p * p; q <= limit; q += p) composite[q] = true;
    }
    return out;
  }();
  return primes;
}

}  // namespace

Factorization factorize(std::int64_t n) {
  if (n < 1) throw std::domain_error("factorize: n must be positive");
  Factorization out;
  out.value = n;
  auto take = [&](std::int64_t p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.factors.push_back({p, e});
  };
  for (std::int64_t p : small_primes()) {
    if (p * p > n) break;
    take(p);
  }
  for (std::int64_t p = small_primes().back() + 2; p * p <= n; p += 2) take(p);
  if (n > 1) out.factors.push_back({n, 1});
  return out;
}

std::int64_t totient(std::int64_t n) {
  std::int64_t phi = n;
  for (const auto& [p, e] : factorize(n).factors) phi = phi / p * (p - 1);
  return phi;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out{1};
  for (const auto& [p, e] : factorize(n).factors) {
    std::size_t base = out.size();
    std::int64_t pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

using IntPoly = std::vector<Integer>;

// Exact quotient of num by a monic divisor; both lowest degree first.
IntPoly divide_exact(IntPoly num, const IntPoly& den) {
  const std::size_t dd = den.size() - 1;
  IntPoly quot(num.size() - dd);
  for (std::size_t i = num.size(); i-- > dd;) {
    const Integer c = num[i];
    quot[i - dd] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
  }
  assert(std::all_of(num.begin(), num.end(), [](const Integer& c) { return c == 0; }));
  return quot;
}

// Phi_m = prod_{d | m} (x^d - 1)^mu(m/d) for squarefree m, in int64 with
// overflow checks; nullopt if a coefficient overflows.
std::optional<IntPoly> squarefree_phi(std::int64_t m) {
  const auto primes = factorize(m).factors;
  std::vector<std::int64_t> up, down;
  for (std::int64_t d : divisors(m)) {
    int k = 0;
    for (const auto& [p, e] : primes) k += (m / d) % p == 0;
    (k % 2 == 0 ? up : down).push_back(d);
  }
  std::int64_t degree = 0;
  for (std::int64_t d : up) degree += d;
  std::vector<std::int64_t> c(static_cast<std::size_t>(degree + 1), 0);
  c[0] = 1;
  std::int64_t top = 0;
  for (std::int64_t d : up) {
    // c <- c * (x^d - 1)
    for (std::int64_t i = top + d; i >= 0; --i) {
      const std::int64_t shifted = i >= d ? c[i - d] : 0;
      if (__builtin_sub_overflow(shifted, c[i], &c[i])) return std::nullopt;
    }
    top += d;
  }
  for (std::int64_t d : down) {
    // c <- c / (x^d - 1), exact: q_i = q_{i-d} - c_i.
    const std::int64_t new_top = top - d;
    for (std::int64_t i = 0; i <= new_top; ++i) {
      const std::int64_t prev = i >= d ? c[i - d] : 0;
      if (__builtin_sub_overflow(prev, c[i], &c[i])) return std::nullopt;
    }
    std::fill(c.begin() + new_top + 1, c.begin() + top + 1, 0);
    top = new_top;
  }
  IntPoly out(static_cast<std::size_t>(top + 1));
  for (std::int64_t i = 0; i <= top; ++i) out[i] = Integer(static_cast<long>(c[i]));
  return out;
}

struct PhiCache {
  std::mutex mu;
  std::unordered_map<std::int64_t, std::shared_ptr<const IntPoly>> table;
};

PhiCache& phi_cache() {
  static PhiCache cache;
  return cache;
}

std::shared_ptr<const IntPoly> compute_phi(std::int64_t m) {
  std::int64_t rad = 1;
  for (const auto& [p, e] : factorize(m).factors) rad *= p;
  if (rad != m) {
    // Phi_m(x) = Phi_rad(x^(m/rad)).
    auto base = cyclotomic_polynomial(rad);
    const std::int64_t stride = m / rad;
    IntPoly out(static_cast<std::size_t>((base->size() - 1) * stride + 1));
    for (std::size_t i = 0; i < base->size(); ++i) out[i * stride] = (*base)[i];
    return std::make_shared<const IntPoly>(std::move(out));
  }
  if (auto fast = squarefree_phi(m)) return std::make_shared<const IntPoly>(std::move(*fast));
  IntPoly poly(static_cast<std::size_t>(m + 1));
  poly[0] = -1;
  poly[m] = 1;
  for (std::int64_t d : divisors(m)) {
    if (d == m) continue;
    poly = divide_exact(std::move(poly), *cyclotomic_polynomial(d));
  }
  return std::make_shared<const IntPoly>(std::move(poly));
}

}  // namespace

std::shared_ptr<const std::vector<Integer>> cyclotomic_polynomial(std::int64_t m) {
  if (m < 1) throw std::domain_error("cyclotomic_polynomial: m must be positive");
  auto& cache = phi_cache();
  {
    std::lock_guard lock(cache.mu);
    if (auto it = cache.table.find(m); it != cache.table.end()) return it->second;
  }
  // Computed outside the lock; concurrent fills of the same m are idempotent.
  auto phi = compute_phi(m);
  std::lock_guard lock(cache.mu);
  return cache.table.emplace(m, std::move(phi)).first->second;
}

// ---------------------------------------------------------------------------

ModulusMismatch::ModulusMismatch(std::int64_t lhs, std::int64_t rhs)
    : std::invalid_argument("cyclotomic modulus mismatch (" + std::to_string(lhs) + " vs " +
                            std::to_string(rhs) + "); lift both operands to the lcm first") {}

CyclotomicElement::CyclotomicElement(std::int64_t modulus)
    : modulus_(modulus), coeffs_(static_cast<std::size_t>(totient(modulus))) {}

CyclotomicElement::CyclotomicElement(std::int64_t modulus, const Rational& value)
    : CyclotomicElement(modulus) {
  coeffs_[0] = value;
  coeffs_[0].canonicalize();
}

CyclotomicElement::CyclotomicElement(std::int64_t modulus, std::vector<Rational> reduced, int)
    : modulus_(modulus), coeffs_(std::move(reduced)) {}

CyclotomicElement CyclotomicElement::from_polynomial(std::int64_t modulus,
                                                     std::vector<Rational> coeffs) {
  auto phi = cyclotomic_polynomial(modulus);
  const std::size_t deg = phi->size() - 1;
  for (auto& c : coeffs) c.canonicalize();
  for (std::size_t i = coeffs.size(); i-- > deg;) {
    if (sgn(coeffs[i]) == 0) continue;
    const Rational c = coeffs[i];
    for (std::size_t j = 0; j < deg; ++j) {
      if ((*phi)[j] != 0) coeffs[i - deg + j] -= c * (*phi)[j];
    }
    coeffs[i] = 0;
  }
  coeffs.resize(deg);
  return CyclotomicElement(modulus, std::move(coeffs), 0);
}

CyclotomicElement CyclotomicElement::from_exponent_sums(std::int64_t modulus,
                                                        std::vector<Rational> dense) {
  assert(static_cast<std::int64_t>(dense.size()) <= modulus);
  return from_polynomial(modulus, std::move(dense));
}

bool CyclotomicElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return sgn(c) == 0; });
}

bool CyclotomicElement::is_rational() const {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(),
                     [](const Rational& c) { return sgn(c) == 0; });
}

CyclotomicElement CyclotomicElement::lift(std::int64_t target) const {
  if (target % modulus_ != 0) {
    throw std::invalid_argument("lift: " + std::to_string(modulus_) + " does not divide " +
                                std::to_string(target));
  }
  if (target == modulus_) return *this;
  const std::int64_t stride = target / modulus_;
  std::vector<Rational> dense(static_cast<std::size_t>(target));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) dense[i * stride] = coeffs_[i];
  return from_polynomial(target, std::move(dense));
}

void CyclotomicElement::require_same_modulus(const CyclotomicElement& rhs) const {
  if (rhs.modulus_ != modulus_) throw ModulusMismatch(modulus_, rhs.modulus_);
}

CyclotomicElement CyclotomicElement::operator-() const {
  CyclotomicElement out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

CyclotomicElement& CyclotomicElement::operator+=(const CyclotomicElement& rhs) {
  require_same_modulus(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

CyclotomicElement& CyclotomicElement::operator-=(const CyclotomicElement& rhs) {
  require_same_modulus(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

CyclotomicElement& CyclotomicElement::operator*=(const CyclotomicElement& rhs) {
  require_same_modulus(rhs);
  const std::size_t deg = coeffs_.size();
  std::vector<Rational> prod(2 * deg - 1);
  for (std::size_t i = 0; i < deg; ++i) {
    if (sgn(coeffs_[i]) == 0) continue;
    for (std::size_t j = 0; j < deg; ++j) {
      if (sgn(rhs.coeffs_[j]) != 0) prod[i + j] += coeffs_[i] * rhs.coeffs_[j];
    }
  }
  *this = from_polynomial(modulus_, std::move(prod));
  return *this;
}

CyclotomicElement& CyclotomicElement::operator*=(const Rational& rhs) {
  for (auto& c : coeffs_) c *= rhs;
  return *this;
}

CyclotomicElement CyclotomicElement::pow(std::int64_t exponent) const {
  if (exponent < 0) throw std::domain_error("pow: negative exponent");
  CyclotomicElement result(modulus_, Rational(1));
  CyclotomicElement base = *this;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return result;
}

std::string CyclotomicElement::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (sgn(coeffs_[i]) == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << '(' << coeffs_[i].get_str() << ')';
    if (i > 0) os << "*z" << modulus_ << '^' << i;
  }
  if (first) os << '0';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const CyclotomicElement& z) { return os << z.to_string(); }

CyclotomicElement root_power(std::int64_t m, std::int64_t j) {
  if (m < 1) throw std::domain_error("root_power: m must be positive");
  std::vector<Rational> dense(static_cast<std::size_t>(mod(j, m)) + 1);
  dense.back() = 1;
  return CyclotomicElement::from_polynomial(m, std::move(dense));
}

CyclotomicElement arithmetic(ArithmeticOp op, const CyclotomicElement& lhs,
                             const CyclotomicElement* rhs) {
  if (op == ArithmeticOp::neg) return -lhs;
  if (rhs == nullptr) throw std::invalid_argument("arithmetic: binary operation needs rhs");
  return op == ArithmeticOp::add ? lhs + *rhs : lhs * *rhs;
}

}  // namespace torsion
