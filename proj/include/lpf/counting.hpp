#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpf/constants.hpp"
#include "lpf/mgroup.hpp"
#include "lpf/residue.hpp"

namespace lpf {

inline constexpr u64 kDefaultSieveCapacity = 1'000'000'000;
inline constexpr u64 kDefaultSegmentSize = u64{1} << 22;

/// Per-prime values s(p) = S(p) for odd primes p <= bound, sorted by p.
struct SpTable {
  u64 bound = 0;
  std::vector<std::pair<u64, u64>> entries;

  /// s(p) if p is an odd prime <= bound.
  std::optional<u64> lookup(u64 p) const;
};

struct SieveOptions {
  unsigned threads = 1;
  u64 segment_size = kDefaultSegmentSize;
  u64 capacity = kDefaultSieveCapacity;
  /// When set, s(p) for primes above sqrt(x) is read from here.
  const SpTable* sp_cache = nullptr;
};

/// S(n) for every 3 <= n <= bound. Immutable once built.
class SieveTable {
 public:
  u64 bound() const { return bound_; }
  /// S(n); throws undefined-S for n = 1, 2 and invalid-input past the bound.
  u64 at(u64 n) const;
  /// Raw values; entries 0, 1, 2 are 0.
  std::span<const u64> values() const { return values_; }
  /// s(p) for the odd primes in range.
  SpTable sp_table() const;

 private:
  friend SieveTable sieve_least_primary(u64, const SieveOptions&);
  u64 bound_ = 0;
  std::vector<u64> values_;
};

SieveTable sieve_least_primary(u64 x, const SieveOptions& options = {});

/// Binary cache: "LPFSPV01" then little-endian u64 pairs (p, s(p)).
void save_sp_cache(const SpTable& table, const std::filesystem::path& path);
SpTable load_sp_cache(const std::filesystem::path& path, u64 bound);
/// Cache file name for a bound, e.g. lpf_sp_1000000.bin.
std::string sp_cache_name(u64 bound);

/// floor(x) for x >= 0, exact for integral doubles.
u64 floor_count(double x);

/// Counts from a sieve table; x must not exceed the table bound.
u64 count_A_prime(const SieveTable& table, const PrimePower& q, double x);
u64 count_A(const SieveTable& table, const PrimePower& q, double x);
u64 count_E(const SieveTable& table, const PrimePower& q, double x);

/// Elements of N_B up to x, ascending, including 1.
std::vector<u64> enumerate_N_B(const ResidueClassSet& classes, double x);

enum class CountMode { sieve, predicate, oracle };

/// Odd n <= x with S(n) >= q. predicate: each prime factor tested against
/// B_q mod Q_q; oracle: enumerate_N_B(B_q, x). Both need residue support.
u64 count_A_prime(const PrimePower& q, double x, CountMode mode, const SieveOptions& options = {});

struct AsymptoticValue {
  double value = 0.0;
  /// q > (log x)^{1/3}: outside the range where the main term is claimed.
  bool warning = false;
};

/// (G / Gamma(beta)) x / (log x)^{1 - beta}, for x > 1.
double asymptotic_A_prime(const ConstantReport& report, double x);
/// C_q x / (log x)^{1 - beta}.
AsymptoticValue asymptotic_E(const ConstantReport& report, double x);
/// Main term for q = 2 by complement: x - C_3 x / (log x)^{1/2}.
AsymptoticValue asymptotic_E_two(const ConstantReport& report_q3, double x);

bool outside_main_range(u64 q, double x);

struct CountRecord {
  u64 q = 0;
  double x = 0.0;
  u64 count_A = 0;
  u64 count_A_prime = 0;
  u64 count_E = 0;
  std::optional<double> main_term_A_prime;
  std::optional<double> main_term_E;
  bool warning = false;
};

}  // namespace lpf
