#include "torsion/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include <mpfr.h>

namespace torsion {

VarietySystem::VarietySystem(std::size_t n, std::vector<RationalLaurent> polys)
    : n_(n), polys_(std::move(polys)) {
  if (n_ == 0) throw std::invalid_argument("ambient dimension must be positive");
  if (polys_.empty()) throw std::invalid_argument("a variety needs at least one polynomial");
  for (std::size_t j = 0; j < polys_.size(); ++j) {
    if (polys_[j].nvars() != n_)
      throw DimensionMismatch("polynomial " + std::to_string(j) + " has the wrong number of variables");
    if (polys_[j].is_zero()) throw std::invalid_argument("polynomial " + std::to_string(j) + " is zero");
    max_degree_ = std::max(max_degree_, polys_[j].degree());
  }
}

// ---------------------------------------------------------------------------
// Orbits of primitive vectors under (Z/N)^*.

std::uint64_t orbit_count(std::int64_t order, std::size_t n) {
  // J_n(N) = prod over p^k || N of p^(kn) - p^((k-1)n).
  Integer jordan = 1;
  for (const auto& [p, k] : factorize(order).factors) {
    Integer hi, lo;
    mpz_ui_pow_ui(hi.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k) * n);
    mpz_ui_pow_ui(lo.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k - 1) * n);
    jordan *= hi - lo;
  }
  Integer count = jordan / totient(order);
  if (!count.fits_ulong_p()) return std::numeric_limits<std::uint64_t>::max();
  return count.get_ui();
}

namespace {

// Coordinates are fixed left to right. `stabilizer` is s in
// G_s = {u unit mod N : u = 1 mod s}, the subgroup fixing the prefix;
// `content` is gcd(N, prefix).
void extend_representatives(std::int64_t order, std::size_t n, const std::vector<std::int64_t>& divs,
                            ExponentVector& prefix, std::int64_t stabilizer, std::int64_t content,
                            std::vector<ExponentVector>& out) {
  if (prefix.size() == n) {
    if (content == 1) out.push_back(prefix);
    return;
  }
  const std::size_t remaining = n - prefix.size() - 1;
  for (std::int64_t h : divs) {
    const std::int64_t next_content = std::gcd(content, h);
    if (remaining == 0 && next_content != 1) continue;
    if (h == order) {
      prefix.push_back(0);
      extend_representatives(order, n, divs, prefix, stabilizer, next_content, out);
      prefix.pop_back();
      continue;
    }
    // x = h * w with w a unit mod N/h; under G_s only w mod gcd(N/h, s) is invariant.
    const std::int64_t cofactor = order / h;
    const std::int64_t q = std::gcd(cofactor, stabilizer);
    const std::int64_t next_stabilizer = lcm(stabilizer, cofactor);
    for (std::int64_t r = 0; r < q; ++r) {
      if (std::gcd(r, q) != 1) continue;
      std::int64_t w = r;
      while (std::gcd(w, cofactor) != 1) w += q;
      prefix.push_back(h * w);
      extend_representatives(order, n, divs, prefix, next_stabilizer, next_content, out);
      prefix.pop_back();
    }
  }
}

}  // namespace

std::vector<ExponentVector> orbit_representatives(std::int64_t order, std::size_t n) {
  if (order < 1 || n < 1) throw std::invalid_argument("orbit_representatives: N and n must be positive");
  std::vector<ExponentVector> out;
  ExponentVector prefix;
  prefix.reserve(n);
  extend_representatives(order, n, divisors(order), prefix, 1, order, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TorsionPoint> galois_orbit(const TorsionPoint& pt) {
  std::vector<TorsionPoint> out;
  for (std::int64_t u = 1; u <= pt.order; ++u) {
    if (std::gcd(u, pt.order) != 1) continue;
    TorsionPoint image{pt.order, ExponentVector(pt.dimension())};
    for (std::size_t i = 0; i < pt.dimension(); ++i)
      image.exponents[i] = static_cast<std::int64_t>((static_cast<__int128>(u) * pt.exponents[i]) % pt.order);
    out.push_back(std::move(image));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

bool on_variety_exact(const VarietySystem& system, const TorsionPoint& pt) {
  return std::all_of(system.polys().begin(), system.polys().end(),
                     [&](const RationalLaurent& p) { return evaluate_at_torsion(p, pt).is_zero(); });
}

}  // namespace

std::vector<TorsionPoint> brute_force_torsion(const VarietySystem& system, std::int64_t cap) {
  if (cap < 1) throw std::invalid_argument("brute_force_torsion: cap must be positive");
  std::vector<TorsionPoint> out;
  for (std::int64_t order = 1; order <= cap; ++order) {
    for (auto& rep : orbit_representatives(order, system.dimension())) {
      TorsionPoint pt{order, std::move(rep)};
      if (!on_variety_exact(system, pt)) continue;
      auto orbit = galois_orbit(pt);
      out.insert(out.end(), orbit.begin(), orbit.end());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Certificates.

namespace {

std::optional<TorsionCoset> certificate_on_variety(const VarietySystem& system, const TorsionPoint& pt) {
  if (pt.order < 2) return std::nullopt;
  const TorsionDecomposition dec = decompose(pt.exponents, pt.order);
  for (const auto& poly : system.polys()) {
    if (!is_identically_zero(specialize(poly, dec))) return std::nullopt;
  }
  TorsionCoset coset = make_coset(canonicalize(dec.e, dec.t), IntMatrix::from_columns({dec.c}));
  if (!coset_in_variety(coset, system.polys()))
    throw std::logic_error("certified coset is not contained in the variety");
  if (!coset_contains_point(coset, pt)) throw std::logic_error("certified coset misses its point");
  return coset;
}

}  // namespace

std::optional<TorsionCoset> coset_certificate(const VarietySystem& system, const TorsionPoint& pt) {
  if (pt.dimension() != system.dimension()) throw DimensionMismatch("point and system dimensions differ");
  const TorsionPoint exact = canonicalize(pt.order, pt.exponents);
  if (!on_variety_exact(system, exact)) throw PreconditionError("coset_certificate: point does not lie on V");
  return certificate_on_variety(system, exact);
}

// ---------------------------------------------------------------------------
// Order bound.

bool order_fails_bound(std::int64_t order, std::int64_t degree, std::size_t n) {
  if (degree <= 0) return false;
  const std::int64_t phi = totient(order);
  const auto two_n = static_cast<long double>(2 * n);
  const long double lhs = two_n * std::log(static_cast<long double>(phi));
  const long double rhs = two_n * std::log(2.0L * static_cast<long double>(degree)) +
                          (two_n - 1) * std::log(static_cast<long double>(order));
  if (std::fabs(lhs - rhs) > 1e-9L * std::max(1.0L, std::fabs(rhs))) return lhs <= rhs;
  Integer left, right, base;
  mpz_ui_pow_ui(left.get_mpz_t(), static_cast<unsigned long>(phi), 2 * n);
  mpz_ui_pow_ui(right.get_mpz_t(), static_cast<unsigned long>(2 * degree), 2 * n);
  mpz_ui_pow_ui(base.get_mpz_t(), static_cast<unsigned long>(order), 2 * n - 1);
  return left <= right * base;
}

namespace {

// Euler phi over [lo, hi) with a segmented sieve; primes must cover sqrt(hi).
void totient_segment(std::int64_t lo, std::int64_t hi, const std::vector<std::int64_t>& primes,
                     std::vector<std::int64_t>& phi, std::vector<std::int64_t>& rest) {
  const auto len = static_cast<std::size_t>(hi - lo);
  phi.resize(len);
  rest.resize(len);
  for (std::size_t i = 0; i < len; ++i) phi[i] = rest[i] = lo + static_cast<std::int64_t>(i);
  for (std::int64_t p : primes) {
    if (p * p >= hi) break;
    for (std::int64_t m = (lo + p - 1) / p * p; m < hi; m += p) {
      const auto i = static_cast<std::size_t>(m - lo);
      phi[i] -= phi[i] / p;
      while (rest[i] % p == 0) rest[i] /= p;
    }
  }
  for (std::size_t i = 0; i < len; ++i)
    if (rest[i] > 1) phi[i] -= phi[i] / rest[i];
}

std::vector<std::int64_t> primes_up_to(std::int64_t limit) {
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    for (std::int64_t q = p * p; q <= limit; q += p) composite[q] = true;
  }
  return out;
}

bool fails_with_phi(std::int64_t order, std::int64_t phi, std::int64_t degree, std::size_t n,
                    long double log_two_d) {
  const auto two_n = static_cast<long double>(2 * n);
  const long double lhs = two_n * std::log(static_cast<long double>(phi));
  const long double rhs = two_n * log_two_d + (two_n - 1) * std::log(static_cast<long double>(order));
  if (std::fabs(lhs - rhs) > 1e-9L * std::max(1.0L, std::fabs(rhs))) return lhs <= rhs;
  return order_fails_bound(order, degree, n);
}

}  // namespace

std::int64_t largest_failing_order(std::int64_t degree, std::size_t n, std::int64_t limit) {
  if (degree <= 0 || limit < 1) return 0;
  const auto primes = primes_up_to(static_cast<std::int64_t>(std::sqrt(static_cast<long double>(limit))) + 2);
  const long double log_two_d = std::log(2.0L * static_cast<long double>(degree));
  constexpr std::int64_t segment = 1 << 20;
  std::vector<std::int64_t> phi, rest;
  // Walk segments from the top so the first failure found is the answer.
  for (std::int64_t hi = limit + 1; hi > 1;) {
    const std::int64_t lo = std::max<std::int64_t>(1, hi - segment);
    totient_segment(lo, hi, primes, phi, rest);
    for (std::int64_t order = hi - 1; order >= lo; --order) {
      if (fails_with_phi(order, phi[static_cast<std::size_t>(order - lo)], degree, n, log_two_d)) return order;
    }
    hi = lo;
  }
  return 0;
}

namespace {

struct Mpfr {
  mpfr_t v;
  Mpfr() { mpfr_init2(v, 128); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

// True when every N >= 2^k satisfies N^(1/(2n)) >= 2d (e^gamma L + 3/L),
// L = ln ln N. Each quantity is rounded in the direction that makes the
// test harder to pass.
bool cutoff_holds(unsigned k, std::int64_t degree, std::size_t n) {
  Mpfr y_lo, L_lo, L_up, egamma_up, rs_up, tmp, root_lo, mono;
  mpfr_set_ui(tmp.v, 2, MPFR_RNDN);
  mpfr_log(y_lo.v, tmp.v, MPFR_RNDD);
  mpfr_mul_ui(y_lo.v, y_lo.v, k, MPFR_RNDD);  // ln X, rounded down
  mpfr_log(L_lo.v, y_lo.v, MPFR_RNDD);

  Mpfr y_up;
  mpfr_log(y_up.v, tmp.v, MPFR_RNDU);
  mpfr_mul_ui(y_up.v, y_up.v, k, MPFR_RNDU);
  mpfr_log(L_up.v, y_up.v, MPFR_RNDU);

  // Past L = 1.3 the totient bound's denominator is increasing in L.
  if (mpfr_cmp_d(L_lo.v, 1.3) < 0) return false;
  // L * ln X >= 2n makes the margin nondecreasing from here on.
  mpfr_mul(mono.v, L_lo.v, y_lo.v, MPFR_RNDD);
  if (mpfr_cmp_ui(mono.v, 2 * n) < 0) return false;

  mpfr_const_euler(egamma_up.v, MPFR_RNDU);
  mpfr_exp(egamma_up.v, egamma_up.v, MPFR_RNDU);
  mpfr_mul(rs_up.v, egamma_up.v, L_up.v, MPFR_RNDU);
  mpfr_ui_div(tmp.v, 3, L_lo.v, MPFR_RNDU);
  mpfr_add(rs_up.v, rs_up.v, tmp.v, MPFR_RNDU);
  mpfr_mul_ui(rs_up.v, rs_up.v, static_cast<unsigned long>(2 * degree), MPFR_RNDU);

  // X^(1/(2n)) = 2^(k/(2n)), rounded down.
  mpfr_set_ui(root_lo.v, k, MPFR_RNDN);
  mpfr_div_ui(root_lo.v, root_lo.v, static_cast<unsigned long>(2 * n), MPFR_RNDD);
  mpfr_exp2(root_lo.v, root_lo.v, MPFR_RNDD);
  return mpfr_cmp(root_lo.v, rs_up.v) >= 0;
}

}  // namespace

std::int64_t bound_scan_cutoff(std::int64_t degree, std::size_t n) {
  if (degree <= 0) return 1;
  for (unsigned k = 4; k <= 62; ++k)
    if (cutoff_holds(k, degree, n)) return std::int64_t{1} << k;
  return std::numeric_limits<std::int64_t>::max();
}

std::optional<std::int64_t> order_bound(const VarietySystem& system, std::int64_t scan_limit) {
  const std::int64_t degree = system.max_degree();
  if (degree == 0) return 1;
  const std::int64_t cutoff = bound_scan_cutoff(degree, system.dimension());
  if (cutoff > scan_limit) return std::nullopt;
  return 1 + largest_failing_order(degree, system.dimension(), cutoff);
}

// ---------------------------------------------------------------------------
// Modular prefilter. A value that is nonzero under zeta_N -> omega in F_p,
// p = 1 mod N, is nonzero in Q(zeta_N); zero there is confirmed exactly.

namespace {

using u64 = std::uint64_t;

u64 mul_mod(u64 a, u64 b, u64 p) { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p); }

u64 pow_mod(u64 base, u64 exp, u64 p) {
  u64 out = 1;
  base %= p;
  while (exp) {
    if (exp & 1) out = mul_mod(out, base, p);
    base = mul_mod(base, base, p);
    exp >>= 1;
  }
  return out;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s && composite; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

struct ScaledTerm {
  ExponentVector exponents;
  Integer coeff;
};

// Each polynomial times the lcm of its denominators.
std::vector<std::vector<ScaledTerm>> scale_to_integers(const VarietySystem& system) {
  std::vector<std::vector<ScaledTerm>> out;
  for (const auto& poly : system.polys()) {
    Integer den = 1;
    for (const auto& [e, c] : poly.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    auto& terms = out.emplace_back();
    for (const auto& [e, c] : poly.terms()) terms.push_back({e, Integer(c.get_num() * (den / c.get_den()))});
  }
  return out;
}

class VanishingFilter {
 public:
  VanishingFilter(const std::vector<std::vector<ScaledTerm>>& polys, std::int64_t order) : order_(order) {
    const auto N = static_cast<u64>(order);
    u64 k = ((u64{1} << 61) + N - 1) / N;
    while (!is_prime(k * N + 1)) ++k;
    prime_ = k * N + 1;
    const auto factors = factorize(order).factors;
    for (u64 h = 2;; ++h) {
      const u64 omega = pow_mod(h, (prime_ - 1) / N, prime_);
      bool primitive = true;
      for (const auto& [q, e] : factors) primitive = primitive && pow_mod(omega, N / static_cast<u64>(q), prime_) != 1;
      if (!primitive) continue;
      powers_.resize(N);
      powers_[0] = 1;
      for (u64 j = 1; j < N; ++j) powers_[j] = mul_mod(powers_[j - 1], omega, prime_);
      break;
    }
    Integer p_big;
    mpz_set_ui(p_big.get_mpz_t(), prime_);
    for (const auto& terms : polys) {
      auto& reduced = polys_.emplace_back();
      for (const auto& t : terms) {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), t.coeff.get_mpz_t(), p_big.get_mpz_t());
        reduced.push_back({&t.exponents, r.get_ui()});
      }
    }
  }

  /// False only if some polynomial is certainly nonzero at zeta_N^a.
  bool may_vanish(std::span<const std::int64_t> a) const {
    for (const auto& terms : polys_) {
      u64 acc = 0;
      for (const auto& [exps, coeff] : terms) {
        __int128 dot = 0;
        for (std::size_t i = 0; i < a.size(); ++i) dot += static_cast<__int128>((*exps)[i]) * a[i];
        auto idx = static_cast<std::int64_t>(dot % order_);
        if (idx < 0) idx += order_;
        acc += mul_mod(coeff, powers_[static_cast<std::size_t>(idx)], prime_);
        if (acc >= prime_) acc -= prime_;
      }
      if (acc != 0) return false;
    }
    return true;
  }

 private:
  std::int64_t order_;
  u64 prime_ = 0;
  std::vector<u64> powers_;
  std::vector<std::vector<std::pair<const ExponentVector*, u64>>> polys_;
};

struct OrderScan {
  std::vector<TorsionPoint> points;  // representatives not certified on a coset
  std::vector<TorsionCoset> cosets;
};

OrderScan scan_order(const VarietySystem& system, const std::vector<std::vector<ScaledTerm>>& scaled,
                     std::int64_t order) {
  OrderScan out;
  const VanishingFilter filter(scaled, order);
  for (auto& rep : orbit_representatives(order, system.dimension())) {
    if (!filter.may_vanish(rep)) continue;
    TorsionPoint pt{order, std::move(rep)};
    if (!on_variety_exact(system, pt)) continue;
    if (auto coset = certificate_on_variety(system, pt)) {
      out.cosets.push_back(std::move(*coset));
    } else {
      out.points.push_back(std::move(pt));
    }
  }
  return out;
}

std::vector<OrderScan> scan_orders(const VarietySystem& system, std::int64_t first, std::int64_t last,
                                   unsigned jobs) {
  if (last < first) return {};
  const auto scaled = scale_to_integers(system);
  std::vector<OrderScan> results(static_cast<std::size_t>(last - first + 1));
  std::atomic<std::int64_t> next{first};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    try {
      for (std::int64_t order; (order = next.fetch_add(1)) <= last;)
        results[static_cast<std::size_t>(order - first)] = scan_order(system, scaled, order);
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = last + 1;
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(last - first + 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

// Largest N in [first, last] such that the orbit counts of first..N fit the budget.
std::int64_t within_budget(std::size_t n, std::int64_t first, std::int64_t last, std::uint64_t& budget) {
  std::int64_t reached = first - 1;
  for (std::int64_t order = first; order <= last; ++order) {
    const std::uint64_t cost = orbit_count(order, n);
    if (cost > budget) break;
    budget -= cost;
    reached = order;
  }
  return reached;
}

}  // namespace

TorsionReport solve(const VarietySystem& system, const SolveOptions& options) {
  TorsionReport report;
  report.certified_bound = order_bound(system, options.bound_scan_limit);
  if (!report.certified_bound)
    report.diagnostics.push_back("order bound scan exceeds the scan limit; no completeness certificate");

  std::int64_t cap = 0;
  if (options.cap_override) {
    cap = report.certified_bound ? std::min(*options.cap_override, *report.certified_bound) : *options.cap_override;
  } else if (report.certified_bound) {
    cap = *report.certified_bound;
  } else {
    cap = std::numeric_limits<std::int64_t>::max();
  }

  std::uint64_t budget = options.budget;
  const std::int64_t reachable = within_budget(system.dimension(), 1, cap, budget);
  if (reachable < cap) {
    if (options.cap_override || report.certified_bound) {
      report.budget_exceeded = true;
      report.diagnostics.push_back("evaluation budget of " + std::to_string(options.budget) +
                                   " exhausted after order " + std::to_string(reachable) +
                                   " (requested cap " + std::to_string(cap) + ")");
    } else {
      report.diagnostics.push_back("no cap or bound available; scanned as far as the budget allows");
    }
    cap = reachable;
  }
  report.scanned_cap = cap;
  report.complete = !report.budget_exceeded && report.certified_bound &&
                    (!options.cap_override || *options.cap_override >= *report.certified_bound);

  std::set<TorsionCoset> cosets;
  std::vector<TorsionPoint> candidates;
  for (auto& scan : scan_orders(system, 1, cap, options.jobs)) {
    cosets.insert(scan.cosets.begin(), scan.cosets.end());
    candidates.insert(candidates.end(), scan.points.begin(), scan.points.end());
  }

  if (options.probe_limit && *options.probe_limit > cap) {
    const std::int64_t probe_end = within_budget(system.dimension(), cap + 1, *options.probe_limit, budget);
    if (probe_end < *options.probe_limit)
      report.diagnostics.push_back("probe truncated at order " + std::to_string(probe_end) + " by the budget");
    for (auto& scan : scan_orders(system, cap + 1, probe_end, options.jobs))
      cosets.insert(scan.cosets.begin(), scan.cosets.end());
  }

  // Conjugates of a coset in V lie in V as well.
  std::set<TorsionCoset> closed;
  for (const auto& c : cosets)
    for (const auto& g : galois_orbit(c.translate)) closed.insert(make_coset(g, c.directions));
  report.cosets.assign(closed.begin(), closed.end());
  for (const auto& rep : candidates) {
    for (auto& pt : galois_orbit(rep)) {
      const bool covered = std::any_of(report.cosets.begin(), report.cosets.end(),
                                       [&](const TorsionCoset& c) { return coset_contains_point(c, pt); });
      if (!covered) report.isolated_points.push_back(std::move(pt));
    }
  }
  std::sort(report.isolated_points.begin(), report.isolated_points.end());
  report.isolated_points.erase(std::unique(report.isolated_points.begin(), report.isolated_points.end()),
                               report.isolated_points.end());
  return report;
}

}  // namespace torsion
