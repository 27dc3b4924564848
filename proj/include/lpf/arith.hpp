#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

// Word-size integer arithmetic shared by the rest of the library.
namespace lpf::arith {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

constexpr u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// a * b, or nullopt on 64-bit overflow.
constexpr std::optional<u64> checked_mul(u64 a, u64 b) {
  u64 out = 0;
  if (__builtin_mul_overflow(a, b, &out)) return std::nullopt;
  return out;
}

/// base^exp, or nullopt on 64-bit overflow.
constexpr std::optional<u64> checked_pow(u64 base, unsigned exp) {
  u64 result = 1;
  for (unsigned i = 0; i < exp; ++i) {
    auto next = checked_mul(result, base);
    if (!next) return std::nullopt;
    result = *next;
  }
  return result;
}

u64 isqrt_floor(u64 n);

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(u64 n);

/// Modular inverse of a mod m; requires gcd(a, m) = 1 and m >= 2.
u64 inverse_mod(u64 a, u64 m);

/// Combine x = r1 (mod m1), x = r2 (mod m2) for coprime moduli.
u64 crt_pair(u64 r1, u64 m1, u64 r2, u64 m2);

/// All primes <= limit, ascending.
std::vector<u64> primes_up_to(u64 limit);

/// Segmented sieve of Eratosthenes over [2, limit]. The range is split into
/// fixed blocks of `block_size` integers; `visit(block_index, primes)` sees
/// the primes of each block in ascending order. Block boundaries depend only
/// on `limit` and `block_size`, so results reduced per block are independent
/// of the thread count.
void for_each_prime_block(u64 limit, u64 block_size, unsigned threads,
                          const std::function<void(std::size_t, std::span<const u64>)>& visit);

std::size_t prime_block_count(u64 limit, u64 block_size);

}  // namespace lpf::arith
