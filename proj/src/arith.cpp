#include "lpf/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lpf/error.hpp"
#include "lpf/parallel.hpp"

namespace lpf::arith {

namespace {

bool miller_rabin_witness(u64 n, u64 d, int r, u64 a) {
  a %= n;
  if (a == 0) return true;
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < r; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

u64 isqrt_floor(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // Bases proven sufficient for n < 2^64 (Sinclair).
  for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
    if (!miller_rabin_witness(n, d, r, a)) return false;
  }
  return true;
}

u64 inverse_mod(u64 a, u64 m) {
  __int128 t = 0, new_t = 1;
  __int128 r = m, new_r = a % m;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) fail(ErrorKind::invalid_input, "inverse_mod: arguments are not coprime");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

u64 crt_pair(u64 r1, u64 m1, u64 r2, u64 m2) {
  const auto modulus = checked_mul(m1, m2);
  if (!modulus) fail(ErrorKind::capacity, "crt_pair: modulus exceeds 64 bits");
  // x = r1 + m1 * ((r2 - r1) * m1^{-1} mod m2)
  const u64 inv = m2 == 1 ? 0 : inverse_mod(m1 % m2, m2);
  const u64 diff = (r2 % m2 + m2 - r1 % m2) % m2;
  const u64 k = m2 == 1 ? 0 : mul_mod(diff, inv, m2);
  return static_cast<u64>((static_cast<u128>(k) * m1 + r1 % m1) % *modulus);
}

std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

std::size_t prime_block_count(u64 limit, u64 block_size) {
  if (limit < 2) return 0;
  return static_cast<std::size_t>((limit - 2) / block_size + 1);
}

void for_each_prime_block(u64 limit, u64 block_size, unsigned threads,
                          const std::function<void(std::size_t, std::span<const u64>)>& visit) {
  const std::size_t blocks = prime_block_count(limit, block_size);
  if (blocks == 0) return;
  const std::vector<u64> base = primes_up_to(isqrt_floor(limit));
  parallel_for(blocks, threads, [&](std::size_t b) {
    const u64 lo = 2 + b * block_size;
    const u64 hi = std::min(limit, lo + block_size - 1);
    std::vector<char> composite(hi - lo + 1, 0);
    for (u64 p : base) {
      if (p * p > hi) break;
      u64 start = std::max(p * p, (lo + p - 1) / p * p);
      for (u64 j = start; j <= hi; j += p) composite[j - lo] = 1;
    }
    std::vector<u64> primes;
    for (u64 n = lo; n <= hi; ++n) {
      if (!composite[n - lo]) primes.push_back(n);
    }
    visit(b, primes);
  });
}

}  // namespace lpf::arith
