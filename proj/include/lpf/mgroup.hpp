#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Structure of the multiplicative group M_n = (Z/nZ)^x: factorization,
// primary decomposition and the least primary factor S(n).
namespace lpf {

using u64 = std::uint64_t;

/// A prime power base^exponent with exponent >= 1.
class PrimePower {
 public:
  /// Throws invalid-input unless base is prime, exponent >= 1 and the value
  /// fits in 64 bits.
  PrimePower(u64 base, unsigned exponent);

  /// Recognizes `value` as a prime power; nullopt otherwise.
  static std::optional<PrimePower> from_value(u64 value);
  /// Same as from_value but throws invalid-input on failure.
  static PrimePower parse(u64 value);

  u64 base() const { return base_; }
  unsigned exponent() const { return exponent_; }
  u64 value() const { return value_; }

  friend bool operator==(const PrimePower& a, const PrimePower& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const PrimePower& a, const PrimePower& b) {
    return a.value_ <=> b.value_;
  }

 private:
  u64 base_;
  unsigned exponent_;
  u64 value_;
};

struct PrimeFactor {
  u64 prime;
  unsigned multiplicity;
  friend bool operator==(const PrimeFactor&, const PrimeFactor&) = default;
};

/// n = prod p^r over `factors`, primes strictly increasing.
struct Factorization {
  u64 n = 1;
  std::vector<PrimeFactor> factors;

  std::string to_string() const;
};

/// Multiset of prime powers, ascending by value; the cyclic factors of M_n.
struct PrimaryDecomposition {
  std::vector<PrimePower> components;

  u64 order() const;  // product of component values, i.e. phi(n)
  std::string to_string() const;
};

inline constexpr u64 kFactorizeBound = (u64{1} << 63) - 1;

/// Exact factorization of 1 <= n <= 2^63 - 1.
Factorization factorize(u64 n);

/// v_p(n): the largest k with p^k | n.
unsigned p_adic_valuation(u64 n, u64 p);

u64 euler_phi(u64 n);

/// Primary decomposition of M_n for n >= 3; trivial-group error for n = 1, 2.
PrimaryDecomposition primary_decomposition(u64 n);

/// S(n); undefined-S error for n = 1, 2.
PrimePower least_primary_factor(u64 n);

/// Least primary factor of M_p for an odd prime p, i.e. the smallest l^v with
/// l^v || p - 1. Also equals S(p^k) for every k >= 1.
u64 least_primary_of_odd_prime(u64 p);

/// q+: the least prime power strictly greater than q.
PrimePower next_prime_power(const PrimePower& q);

/// m(l, q): the largest m with l^m < q. Invalid-input when l >= q or l is not
/// prime.
unsigned m_exponent(u64 ell, const PrimePower& q);

}  // namespace lpf
