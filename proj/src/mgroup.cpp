#include "lpf/mgroup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lpf/arith.hpp"
#include "lpf/error.hpp"

namespace lpf {

using arith::u128;

PrimePower::PrimePower(u64 base, unsigned exponent) : base_(base), exponent_(exponent) {
  if (exponent == 0) fail(ErrorKind::invalid_input, "prime power exponent must be >= 1");
  if (!arith::is_prime(base)) {
    fail(ErrorKind::invalid_input, "prime power base " + std::to_string(base) + " is not prime");
  }
  const auto v = arith::checked_pow(base, exponent);
  if (!v) fail(ErrorKind::invalid_input, "prime power exceeds 64 bits");
  value_ = *v;
}

std::optional<PrimePower> PrimePower::from_value(u64 value) {
  if (value < 2) return std::nullopt;
  if (arith::is_prime(value)) return PrimePower(value, 1);
  // value = p^k with k >= 2 forces p <= 2^32; try each k via integer roots.
  for (unsigned k = 2; k < 64 && (u64{1} << k) <= value; ++k) {
    u64 root = static_cast<u64>(std::pow(static_cast<long double>(value), 1.0L / k));
    for (u64 r = root > 1 ? root - 1 : 1; r <= root + 1; ++r) {
      if (r < 2) continue;
      const auto p = arith::checked_pow(r, k);
      if (p && *p == value && arith::is_prime(r)) return PrimePower(r, k);
    }
  }
  return std::nullopt;
}

PrimePower PrimePower::parse(u64 value) {
  auto pp = from_value(value);
  if (!pp) fail(ErrorKind::invalid_input, std::to_string(value) + " is not a prime power");
  return *pp;
}

std::string Factorization::to_string() const {
  if (factors.empty()) return "1";
  std::ostringstream out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) out << " * ";
    out << factors[i].prime;
    if (factors[i].multiplicity > 1) out << '^' << factors[i].multiplicity;
  }
  return out.str();
}

u64 PrimaryDecomposition::order() const {
  u64 order = 1;
  for (const auto& c : components) order *= c.value();
  return order;
}

std::string PrimaryDecomposition::to_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i) out << ", ";
    out << components[i].value();
  }
  out << '}';
  return out.str();
}

namespace {

const std::vector<u64>& trial_primes() {
  static const std::vector<u64> primes = arith::primes_up_to(1 << 12);
  return primes;
}

u64 pollard_brent(u64 n, u64 seed) {
  if (n % 2 == 0) return 2;
  const u64 c = seed;
  auto f = [&](u64 x) { return (arith::mul_mod(x, x, n) + c) % n; };
  u64 y = seed + 1, x = y, g = 1, q = 1, ys = y;
  const u64 m = 128;
  for (u64 r = 1; g == 1; r <<= 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    for (u64 k = 0; k < r && g == 1; k += m) {
      ys = y;
      for (u64 i = 0; i < std::min(m, r - k); ++i) {
        y = f(y);
        q = arith::mul_mod(q, x > y ? x - y : y - x, n);
      }
      g = std::gcd(q, n);
    }
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

void split_large(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (arith::is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (u64 seed = 1;; ++seed) {
    const u64 d = pollard_brent(n, seed);
    if (d != n && d != 1) {
      split_large(d, out);
      split_large(n / d, out);
      return;
    }
  }
}

}  // namespace

Factorization factorize(u64 n) {
  if (n == 0) fail(ErrorKind::invalid_input, "factorize: n must be positive");
  if (n > kFactorizeBound) fail(ErrorKind::capacity, "factorize: n exceeds 2^63 - 1");
  Factorization result;
  result.n = n;
  u64 rest = n;
  for (u64 p : trial_primes()) {
    if (p * p > rest) break;
    if (rest % p) continue;
    unsigned r = 0;
    while (rest % p == 0) {
      rest /= p;
      ++r;
    }
    result.factors.push_back({p, r});
  }
  if (rest > 1) {
    std::vector<u64> large;
    split_large(rest, large);
    std::sort(large.begin(), large.end());
    for (u64 p : large) {
      if (!result.factors.empty() && result.factors.back().prime == p) {
        ++result.factors.back().multiplicity;
      } else {
        result.factors.push_back({p, 1});
      }
    }
  }
  return result;
}

unsigned p_adic_valuation(u64 n, u64 p) {
  if (n == 0) fail(ErrorKind::invalid_input, "p_adic_valuation: n must be positive");
  if (p < 2) fail(ErrorKind::invalid_input, "p_adic_valuation: p must be prime");
  unsigned k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

u64 euler_phi(u64 n) {
  u64 phi = n;
  for (const auto& f : factorize(n).factors) phi = phi / f.prime * (f.prime - 1);
  return phi;
}

PrimaryDecomposition primary_decomposition(u64 n) {
  if (n == 1 || n == 2) {
    fail(ErrorKind::trivial_group, "M_" + std::to_string(n) + " is the trivial group");
  }
  PrimaryDecomposition out;
  for (const auto& [p, r] : factorize(n).factors) {
    if (p == 2) {
      // M_{2^r} = Z_2 + Z_{2^{r-2}} for r >= 2; trivial for r = 1.
      if (r >= 2) out.components.emplace_back(2, 1);
      if (r >= 3) out.components.emplace_back(2, r - 2);
      continue;
    }
    // M_{p^r} cyclic of order p^{r-1}(p-1).
    if (r >= 2) out.components.emplace_back(p, r - 1);
    for (const auto& [ell, v] : factorize(p - 1).factors) out.components.emplace_back(ell, v);
  }
  std::sort(out.components.begin(), out.components.end());
  return out;
}

PrimePower least_primary_factor(u64 n) {
  if (n == 1 || n == 2) {
    fail(ErrorKind::undefined_s, "S(" + std::to_string(n) + ") is undefined: M_" +
                                     std::to_string(n) + " is trivial");
  }
  return primary_decomposition(n).components.front();
}

u64 least_primary_of_odd_prime(u64 p) {
  if (p < 3 || p % 2 == 0 || !arith::is_prime(p)) fail(ErrorKind::invalid_input, "expected an odd prime");
  u64 best = ~u64{0};
  for (const auto& [ell, v] : factorize(p - 1).factors) {
    best = std::min(best, *arith::checked_pow(ell, v));
  }
  return best;
}

PrimePower next_prime_power(const PrimePower& q) {
  for (u64 v = q.value() + 1;; ++v) {
    if (v == 0) fail(ErrorKind::capacity, "next_prime_power: overflow");
    if (auto pp = PrimePower::from_value(v)) return *pp;
  }
}

unsigned m_exponent(u64 ell, const PrimePower& q) {
  if (!arith::is_prime(ell)) fail(ErrorKind::invalid_input, "m_exponent: l must be prime");
  if (ell >= q.value()) fail(ErrorKind::invalid_input, "m_exponent: requires l < q");
  unsigned m = 0;
  u64 power = 1;  // ell^m, always < q
  while (true) {
    const auto next = arith::checked_mul(power, ell);
    if (!next || *next >= q.value()) return m;
    power = *next;
    ++m;
  }
}

}  // namespace lpf
