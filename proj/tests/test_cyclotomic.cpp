#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <thread>

#include "support.hpp"
#include "torsion/cyclotomic.hpp"

using namespace torsion;
using torsion::testing::naive_gcd;
using torsion::testing::naive_totient;
using torsion::testing::numeric_value;

namespace {

std::vector<Integer> poly_mul(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  std::vector<Integer> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<Integer> ints(std::initializer_list<long> xs) {
  std::vector<Integer> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

CyclotomicElement rational(std::int64_t m, long num, long den = 1) { return {m, Rational(num, den)}; }

}  // namespace

TEST_CASE("totient") {
  CHECK(totient(1) == 1);
  CHECK(totient(12) == 4);
  CHECK(totient(30030) == 5760);
  for (std::int64_t n = 1; n <= 500; ++n) CHECK(totient(n) == naive_totient(n));
}

TEST_CASE("factorize") {
  CHECK(factorize(1).factors.empty());
  CHECK(factorize(12).factors == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK(factorize(9240).factors == std::vector<PrimePower>{{2, 3}, {3, 1}, {5, 1}, {7, 1}, {11, 1}});
  CHECK(factorize(1'000'000'007).factors == std::vector<PrimePower>{{1'000'000'007, 1}});
  for (std::int64_t n = 1; n <= 2000; ++n) {
    const auto f = factorize(n);
    std::int64_t prod = 1;
    std::int64_t prev = 1;
    for (const auto& [p, k] : f.factors) {
      CHECK(p > prev);
      prev = p;
      for (std::int64_t d = 2; d * d <= p; ++d) CHECK(p % d != 0);
      for (int i = 0; i < k; ++i) prod *= p;
    }
    CHECK(prod == n);
  }
  CHECK_THROWS(factorize(0));
}

TEST_CASE("divisors and modular helpers") {
  CHECK(divisors(12) == std::vector<std::int64_t>{1, 2, 3, 4, 6, 12});
  CHECK(mod(-7, 5) == 3);
  CHECK(inverse_mod(3, 7) == 5);
  CHECK_THROWS_AS(inverse_mod(4, 6), std::domain_error);
  for (std::int64_t a = -30; a <= 30; ++a)
    for (std::int64_t b = 1; b <= 30; ++b) CHECK(gcd(a, b) == naive_gcd(a, b));
  CHECK(lcm(4, 6) == 12);
}

TEST_CASE("cyclotomic polynomial examples") {
  CHECK(*cyclotomic_polynomial(1) == ints({-1, 1}));
  CHECK(*cyclotomic_polynomial(6) == ints({1, -1, 1}));
  CHECK(*cyclotomic_polynomial(12) == ints({1, 0, -1, 0, 1}));
  CHECK(*cyclotomic_polynomial(105) == *cyclotomic_polynomial(105));
  // Phi_105 is the first with a coefficient -2.
  const auto& p105 = *cyclotomic_polynomial(105);
  CHECK(std::find(p105.begin(), p105.end(), Integer(-2)) != p105.end());
}

TEST_CASE("product of Phi_d over divisors is x^m - 1") {
  for (std::int64_t m = 1; m <= 200; ++m) {
    std::vector<Integer> prod = ints({1});
    for (std::int64_t d = 1; d <= m; ++d)
      if (m % d == 0) prod = poly_mul(prod, *cyclotomic_polynomial(d));
    std::vector<Integer> expected(m + 1, 0);
    expected[0] = -1;
    expected[m] = 1;
    CHECK_MESSAGE(prod == expected, "m = " << m);
    const auto& phi = *cyclotomic_polynomial(m);
    CHECK(static_cast<std::int64_t>(phi.size()) - 1 == totient(m));
    CHECK(phi.back() == 1);
  }
}

TEST_CASE("cyclotomic cache is safe under concurrent fills") {
  std::vector<std::jthread> pool;
  std::vector<std::vector<Integer>> seen(8);
  for (int w = 0; w < 8; ++w)
    pool.emplace_back([&, w] {
      for (std::int64_t m = 300; m < 340; ++m) seen[w] = *cyclotomic_polynomial(m + w % 2);
    });
  pool.clear();
  for (int w = 0; w < 8; ++w) CHECK(seen[w] == *cyclotomic_polynomial(339 + w % 2));
}

TEST_CASE("root_power examples") {
  CHECK(root_power(6, 0) == rational(6, 1));
  CHECK(root_power(3, 2) == rational(3, -1) - root_power(3, 1));
  CHECK(root_power(6, 3) == rational(6, -1));
  CHECK(root_power(6, -3) == rational(6, -1));
  CHECK(root_power(1, 5) == rational(1, 1));
}

TEST_CASE("arithmetic examples") {
  const auto z3 = root_power(3, 1), z3sq = root_power(3, 2);
  CHECK(arithmetic(ArithmeticOp::add, z3, &z3sq) == rational(3, -1));
  const auto i = root_power(4, 1);
  CHECK(arithmetic(ArithmeticOp::mul, i, &i) == rational(4, -1));
  CHECK(arithmetic(ArithmeticOp::neg, i) == root_power(4, 3));
  const auto one = rational(7, 1);
  const auto z = root_power(7, 3) + rational(7, 2, 5);
  CHECK(arithmetic(ArithmeticOp::mul, z, &one) == z);
  const auto other = root_power(5, 1);
  CHECK_THROWS_AS(arithmetic(ArithmeticOp::add, z, &other), ModulusMismatch);
  CHECK_THROWS(arithmetic(ArithmeticOp::add, z));
}

TEST_CASE("is_zero examples") {
  CHECK(is_zero(CyclotomicElement(1)));
  CHECK(is_zero(CyclotomicElement(97)));
  CHECK(is_zero(rational(3, 1) + root_power(3, 1) + root_power(3, 2)));
  CHECK_FALSE(is_zero(rational(5, 1) + root_power(5, 1)));
}

TEST_CASE("full root sums vanish and rational sums do not") {
  for (std::int64_t m = 2; m <= 100; ++m) {
    std::vector<Rational> dense(m, 1);
    CHECK_MESSAGE(CyclotomicElement::from_exponent_sums(m, dense).is_zero(), "m = " << m);
    CyclotomicElement acc(m);
    for (std::int64_t j = 0; j < m; ++j) acc += root_power(m, j);
    CHECK(acc.is_zero());
    dense[0] = 2;
    CHECK_FALSE(CyclotomicElement::from_exponent_sums(m, dense).is_zero());
  }
}

TEST_CASE("root_power inverses and orders") {
  for (std::int64_t m = 1; m <= 100; ++m) {
    const auto one = rational(m, 1);
    for (std::int64_t j = 0; j < m; j += (m > 40 ? 7 : 1)) {
      CHECK(root_power(m, j) * root_power(m, m - j) == one);
      CHECK(root_power(m, j).pow(m) == one);
    }
  }
}

TEST_CASE("zero test agrees with a numerical oracle") {
  // Integer weights make z an algebraic integer: if nonzero its norm is a
  // nonzero integer, so some conjugate has modulus >= 1.
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<int> weight(-2, 2);
  int zeros = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const std::int64_t m = std::uniform_int_distribution<std::int64_t>(1, 30)(rng);
    std::vector<Rational> dense(m, 0);
    for (int s = 0; s < 4; ++s) dense[std::uniform_int_distribution<std::int64_t>(0, m - 1)(rng)] += weight(rng);
    const auto z = CyclotomicElement::from_exponent_sums(m, dense);
    // Canonical form and numeric value agree.
    std::complex<double> direct = 0;
    for (std::int64_t j = 0; j < m; ++j)
      direct += dense[j].get_d() * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(j) / m);
    CHECK(std::abs(numeric_value(z) - direct) < 1e-9);
    // Check every Galois conjugate: an element is zero iff all conjugates are.
    bool all_small = true;
    for (std::int64_t u = 1; u <= m; ++u) {
      if (naive_gcd(u, m) != 1) continue;
      std::complex<double> conj = 0;
      for (std::int64_t j = 0; j < m; ++j)
        conj += dense[j].get_d() * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(u * j % m) / m);
      all_small = all_small && std::abs(conj) < 1e-9;
    }
    CHECK(z.is_zero() == all_small);
    zeros += z.is_zero();
  }
  CHECK(zeros > 0);
}

TEST_CASE("canonicity: is_zero(x - y) iff coefficient vectors agree") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> weight(-1, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::int64_t m = std::uniform_int_distribution<std::int64_t>(2, 24)(rng);
    auto build = [&] {
      std::vector<Rational> dense(m, 0);
      for (auto& x : dense) x = weight(rng);
      return CyclotomicElement::from_exponent_sums(m, dense);
    };
    const auto x = build();
    auto y = build();
    if (trial % 3 == 0) y = x + CyclotomicElement::from_exponent_sums(m, std::vector<Rational>(m, 1));
    const bool same = std::equal(x.coeffs().begin(), x.coeffs().end(), y.coeffs().begin(), y.coeffs().end());
    CHECK((x - y).is_zero() == same);
    CHECK((x == y) == same);
  }
}

TEST_CASE("field axioms on random elements") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> c(-3, 3);
  for (std::int64_t m : {1, 2, 5, 8, 9, 12, 15, 30}) {
    auto random_el = [&] {
      std::vector<Rational> raw(2 * m);
      for (auto& x : raw) x = Rational(c(rng), 1 + (c(rng) + 3));
      return CyclotomicElement::from_polynomial(m, raw);
    };
    for (int i = 0; i < 20; ++i) {
      const auto a = random_el(), b = random_el(), d = random_el();
      CHECK(a * (b + d) == a * b + a * d);
      CHECK(a * b == b * a);
      CHECK((a * b) * d == a * (b * d));
      CHECK((a + (-a)).is_zero());
      CHECK(std::abs(numeric_value(a * b) - numeric_value(a) * numeric_value(b)) < 1e-6);
    }
  }
}

TEST_CASE("lift embeds compatibly") {
  for (std::int64_t m : {1, 2, 3, 4, 6, 10}) {
    for (std::int64_t mult : {1, 2, 3, 5}) {
      const std::int64_t target = m * mult;
      for (std::int64_t j = 0; j < m; ++j) CHECK(root_power(m, j).lift(target) == root_power(target, j * mult));
      const auto a = root_power(m, 1) + rational(m, 3, 4);
      const auto b = root_power(m, m - 1) * Rational(-2);
      CHECK((a * b).lift(target) == a.lift(target) * b.lift(target));
    }
  }
  CHECK_THROWS(root_power(4, 1).lift(6));
}

TEST_CASE("is_rational") {
  CHECK(rational(9, 2).is_rational());
  CHECK((root_power(9, 1) + root_power(9, 8)).is_rational() == false);
  CHECK((root_power(4, 1) * root_power(4, 1)).is_rational());
}
