#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lpf/mgroup.hpp"
#include "lpf/residue.hpp"

// Dirichlet characters with exact values, conductors, Gauss sums and L(1, chi).
namespace lpf {

inline constexpr u64 kDefaultPhiCap = 200'000;

/// e^{2 pi i num/den} with 0 <= num < den and gcd(num, den) = 1.
class RootOfUnity {
 public:
  RootOfUnity() = default;
  RootOfUnity(u64 num, u64 den);

  u64 num() const { return num_; }
  u64 den() const { return den_; }  // multiplicative order
  bool is_one() const { return num_ == 0; }
  RootOfUnity conj() const { return RootOfUnity(den_ - num_, den_); }
  std::complex<double> to_complex() const;

  friend RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b);
  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
  /// Orders by angle in [0, 1).
  friend std::strong_ordering operator<=>(const RootOfUnity& a, const RootOfUnity& b) {
    using u128 = unsigned __int128;
    return static_cast<u128>(a.num_) * b.den_ <=> static_cast<u128>(b.num_) * a.den_;
  }

 private:
  u64 num_ = 0;
  u64 den_ = 1;
};

/// One cyclic factor of M_Q in the fixed generator basis.
struct CyclicFactor {
  enum class Kind { odd, two_minus_one, two_five };
  Kind kind;
  u64 prime;
  unsigned prime_exponent;  // the factor lives modulo prime^prime_exponent
  u64 modulus;
  u64 generator;            // residue mod `modulus`
  u64 order;
};

/// M_Q as a product of cyclic factors: the least primitive root for each odd
/// prime power, and {-1, 5} for 2^k with k >= 3.
class UnitGroup {
 public:
  explicit UnitGroup(u64 modulus, u64 max_phi = kDefaultPhiCap);

  u64 modulus() const { return modulus_; }
  u64 order() const { return order_; }
  u64 exponent() const { return exponent_; }
  const std::vector<CyclicFactor>& factors() const { return factors_; }

  bool is_unit(u64 a) const;
  /// Discrete logarithms of a unit on each factor's generator.
  std::vector<u64> log(u64 a) const;
  u64 log_on(std::size_t factor, u64 a) const;
  /// The unit congruent to `residue` modulo the factor's modulus and to 1
  /// modulo the rest of Q.
  u64 lift(std::size_t factor, u64 residue) const;
  /// The unit congruent to `residue` modulo the prime power p^e || Q and to 1
  /// modulo Q / p^e.
  u64 lift_prime_power(u64 prime_power, u64 residue) const;
  /// Mixed-radix index of a unit's log vector, in [0, order()).
  std::size_t log_index(u64 a) const;

 private:
  u64 modulus_;
  u64 order_ = 1;
  u64 exponent_ = 1;
  std::vector<CyclicFactor> factors_;
  std::vector<std::vector<std::uint32_t>> log_tables_;
};

class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const UnitGroup> group, std::vector<u64> exponents);

  u64 modulus() const { return group_->modulus(); }
  const UnitGroup& group() const { return *group_; }
  const std::shared_ptr<const UnitGroup>& group_ptr() const { return group_; }
  const std::vector<u64>& exponents() const { return exponents_; }

  /// chi(a) exactly; nullopt when gcd(a, Q) > 1.
  std::optional<RootOfUnity> value(u64 a) const;
  /// chi(a) as a complex number, 0 off the units.
  std::complex<double> operator()(u64 a) const;

  u64 order() const;
  bool is_principal() const;
  /// chi(-1) = 1.
  bool is_even() const;

  DirichletCharacter conj() const;
  DirichletCharacter pow(u64 k) const;
  friend DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b);
  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b);

 private:
  std::shared_ptr<const UnitGroup> group_;
  std::vector<u64> exponents_;
};

/// All phi(Q) characters mod Q, indexed by their exponent vectors in
/// mixed radix (first factor most significant).
class CharacterGroup {
 public:
  explicit CharacterGroup(u64 modulus, u64 max_phi = kDefaultPhiCap);

  u64 modulus() const { return group_->modulus(); }
  std::size_t size() const { return group_->order(); }
  const UnitGroup& unit_group() const { return *group_; }
  const std::shared_ptr<const UnitGroup>& unit_group_ptr() const { return group_; }

  DirichletCharacter character(std::size_t index) const;
  std::size_t index_of(const DirichletCharacter& chi) const;
  std::vector<DirichletCharacter> characters() const;
  DirichletCharacter principal() const { return character(0); }

 private:
  std::shared_ptr<const UnitGroup> group_;
};

/// The character group mod Q for 3 <= Q with phi(Q) within the cap.
CharacterGroup character_group(u64 modulus, u64 max_phi = kDefaultPhiCap);

/// The factor chi_l mod l^e (l^e || Q) in chi = prod_l chi_l.
DirichletCharacter restriction_component(const DirichletCharacter& chi, u64 ell);

/// Sum of chi_l over B_{l,q} by the closed form
/// [chi = chi_0] l^m (l-1) - [chi^{l-1} = chi_0] l^m + 1.
std::int64_t char_sum_over_B(const DirichletCharacter& chi_ell, u64 ell, const PrimePower& q);

/// Literal sum of chi(b) over the classes of B.
std::complex<double> char_sum_over_B_bruteforce(const DirichletCharacter& chi,
                                                const ResidueClassSet& classes);

/// Weight w(chi) = sum_{b in B_q} conj(chi)(b) for a character mod Q_q,
/// evaluated as the product of the local closed forms.
std::int64_t class_weight(const DirichletCharacter& chi, const PrimePower& q);

struct ImageSize {
  u64 k;             // #{chi(p) : chi in H}
  u64 multiplicity;  // #H / k
};

/// Size of the image of p under a subgroup H of characters.
ImageSize image_size(std::span<const DirichletCharacter> subgroup, u64 p);

struct PrimitiveCharacter {
  u64 conductor;
  DirichletCharacter character;
};

PrimitiveCharacter conductor_and_primitive(const DirichletCharacter& chi);

/// tau(chi) = sum_a chi(a) e^{2 pi i a/q} for a primitive character.
std::complex<double> gauss_sum(const DirichletCharacter& primitive);

/// L(1, chi) for a nonprincipal character from the finite closed forms.
std::complex<double> L1(const DirichletCharacter& chi);

/// L(1, chi) for every character of the group (NaN for the principal one),
/// computed with one multidimensional transform per conductor.
std::vector<std::complex<double>> L1_all(const CharacterGroup& group, unsigned threads = 1);

}  // namespace lpf
