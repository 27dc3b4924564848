#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpf/mgroup.hpp"

// The congruence side: the modulus Q_q, the residue class sets B_q and
// B_{l,q}, the density beta_q, and the criterion for S(m) >= q.
namespace lpf {

/// Exact rational with positive denominator, always reduced.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b);

 private:
  std::int64_t num_;
  std::int64_t den_;
};

/// A subset of the reduced residues modulo `modulus`.
class ResidueClassSet {
 public:
  ResidueClassSet(u64 modulus, std::vector<u64> classes);

  u64 modulus() const { return modulus_; }
  const std::vector<u64>& classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }
  /// Whether n mod modulus is one of the classes.
  bool contains(u64 n) const;

  friend bool operator==(const ResidueClassSet&, const ResidueClassSet&) = default;

 private:
  u64 modulus_;
  std::vector<u64> classes_;  // strictly increasing, each coprime to modulus
};

/// The sets M, H, I and B = (M \ H) u I modulo l^{m(l,q)+1}.
struct LocalClassData {
  u64 ell;
  unsigned m;
  ResidueClassSet full_group;
  ResidueClassSet subgroup_h;
  ResidueClassSet singleton_i;
  ResidueClassSet local_b;
};

struct ResidueLimits {
  u64 max_modulus = u64{1} << 32;
  u64 max_phi = 200'000;
};

/// Q_q = prod_{l<q} l^{m(l,q)+1}. Capacity error past limits.max_modulus.
u64 modulus_Q(const PrimePower& q, const ResidueLimits& limits = {});

/// Whether the residue machinery (Q_q, B_q, characters mod Q_q) fits `limits`.
bool residue_supported(const PrimePower& q, const ResidueLimits& limits = {});

LocalClassData local_class_data(u64 ell, const PrimePower& q);

/// B_q as residues mod Q_q, the CRT product of the local sets B_{l,q}.
ResidueClassSet residue_set_B(const PrimePower& q, const ResidueLimits& limits = {});

/// B_q = prod_{l<q} ((l-2) l^m + 1), the number of classes in B_q.
u64 class_count_B(const PrimePower& q);

/// beta_q = B_q / phi(Q_q), exact.
Rational beta(const PrimePower& q);
Rational beta_next(const PrimePower& q);

/// S(m) >= q, decided from the factorization of m and congruence tests only.
/// m = 1, 2 count as members of every A_q.
bool satisfies_S_at_least(u64 m, const PrimePower& q);

/// The q = 3 special case: 4 does not divide n and every odd prime divisor is
/// 1 mod 4.
bool s_not_two(u64 n);

}  // namespace lpf
