#pragma once

// Brute-force reference implementations. Deliberately naive and independent of
// the library algorithms they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  for (a %= m; e; e >>= 1, a = mulmod(a, a, m)) {
    if (e & 1) r = mulmod(r, a, m);
  }
  return r;
}

inline std::map<u64, unsigned> trial_factor(u64 n) {
  std::map<u64, unsigned> f;
  for (u64 p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      ++f[p];
      n /= p;
    }
  }
  if (n > 1) ++f[n];
  return f;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}

inline u64 phi(u64 n) {
  u64 count = 0;
  for (u64 a = 1; a <= n; ++a) count += std::gcd(a, n) == 1;
  return count;
}

inline std::vector<u64> units(u64 n) {
  std::vector<u64> out;
  for (u64 a = 1; a < n; ++a) {
    if (std::gcd(a, n) == 1) out.push_back(a);
  }
  return out;
}

/// Primary decomposition of (Z/nZ)^x read off from the number of solutions of
/// a^{p^k} = 1: the count of cyclic p-factors of size >= p^k is
/// log_p(N_k / N_{k-1}).
inline std::vector<u64> group_primary_components(u64 n) {
  const auto elements = units(n);
  const u64 order = elements.size();
  std::vector<u64> components;
  for (const auto& [p, e] : trial_factor(order)) {
    std::vector<u64> torsion{1};
    u64 pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      u64 count = 0;
      for (u64 a : elements) count += powmod(a, pk, n) == 1;
      torsion.push_back(count);
    }
    // at_least[k] = number of cyclic factors of order >= p^k
    std::vector<unsigned> at_least(e + 2, 0);
    for (unsigned k = 1; k <= e; ++k) {
      u64 ratio = torsion[k] / torsion[k - 1];
      unsigned c = 0;
      while (ratio > 1) {
        ratio /= p;
        ++c;
      }
      at_least[k] = c;
    }
    u64 size = 1;
    for (unsigned k = 1; k <= e; ++k) {
      size *= p;
      for (unsigned c = at_least[k] - at_least[k + 1]; c > 0; --c) components.push_back(size);
    }
  }
  std::sort(components.begin(), components.end());
  return components;
}

/// S(n) straight from the group, n >= 3.
inline u64 least_primary_bruteforce(u64 n) { return group_primary_components(n).front(); }

/// S(n) from the factorization rule, independent of the library code.
inline u64 least_primary_rule(u64 n) {
  u64 best = ~u64{0};
  for (const auto& [p, r] : trial_factor(n)) {
    if (p == 2) {
      if (r >= 2) best = std::min<u64>(best, 2);
      continue;
    }
    if (r >= 2) best = std::min(best, static_cast<u64>(std::pow(p, r - 1) + 0.5));
    for (const auto& [l, v] : trial_factor(p - 1)) {
      u64 lv = 1;
      for (unsigned i = 0; i < v; ++i) lv *= l;
      best = std::min(best, lv);
    }
  }
  return best;
}

template <typename Contains>
bool in_N_B(u64 n, Contains&& contains) {
  for (const auto& [p, r] : trial_factor(n)) {
    if (!contains(p)) return false;
  }
  return true;
}

/// Smallest d | Q with chi(a) = 1 whenever a = 1 (mod d), a a unit mod Q.
template <typename IsOne>
u64 conductor_search(u64 modulus, IsOne&& is_one) {
  for (u64 d = 1; d <= modulus; ++d) {
    if (modulus % d != 0) continue;
    bool ok = true;
    for (u64 a = 1; a < modulus && ok; a += d) {
      if (std::gcd(a, modulus) == 1) ok = is_one(a);
    }
    if (ok) return d;
  }
  return modulus;
}

inline double digamma(double x) {
  double result = 0.0;
  while (x < 12.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  result += std::log(x) - 0.5 * inv -
            inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 / 132))));
  return result;
}

/// L(1, chi) = -(1/Q) sum_a chi(a) psi(a/Q) for nonprincipal chi mod Q.
template <typename Chi>
std::complex<double> L1_digamma(u64 modulus, Chi&& chi) {
  std::complex<double> sum = 0;
  for (u64 a = 1; a < modulus; ++a) {
    if (std::gcd(a, modulus) == 1) sum += chi(a) * digamma(static_cast<double>(a) / modulus);
  }
  return -sum / static_cast<double>(modulus);
}

inline std::mt19937_64 rng(u64 seed = 0x5eed) { return std::mt19937_64(seed); }

}  // namespace oracle
