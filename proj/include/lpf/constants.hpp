#pragma once

#include <cstdint>
#include <vector>

#include "lpf/mgroup.hpp"
#include "lpf/residue.hpp"

// Numerical evaluation of the leading constants C_q with rigorous truncation
// intervals for the Euler products involved.
namespace lpf {

inline constexpr u64 kDefaultPrimeBound = 10'000'000;

/// A positive quantity known to lie in [midpoint e^{-b}, midpoint e^{b}].
struct EulerProductEstimate {
  double midpoint = 0.0;
  double log_error_bound = 0.0;
  u64 prime_bound = 0;

  double lower() const;
  double upper() const;
  bool contains(double value) const { return lower() <= value && value <= upper(); }
};

struct ShapeTerm {
  unsigned k;
  std::int64_t exponent;
  friend bool operator==(const ShapeTerm&, const ShapeTerm&) = default;
};

/// Local Euler factor prod_k (1 - p^{-k s})^{exponent_k} shared by all primes
/// p = residue (mod Q_q). Terms ascend in k; zero exponents are dropped.
struct LocalFactorShape {
  u64 residue;
  std::vector<ShapeTerm> terms;
};

/// Shape for one class, obtained by building the character subgroups mod Q_q
/// and measuring their images at r.
LocalFactorShape residue_class_factor(const PrimePower& q, u64 residue, const ResidueLimits& limits = {});

/// Shapes for every reduced class mod Q_q. Uses the CRT splitting of each
/// subgroup into local subgroups mod l^{m+1}, so the image size at r is the
/// lcm of the local image sizes.
class FactorShapeTable {
 public:
  static FactorShapeTable build(const PrimePower& q, const ResidueLimits& limits = {});

  u64 modulus() const { return modulus_; }
  u64 phi() const { return phi_; }
  const std::vector<LocalFactorShape>& shapes() const { return shapes_; }
  /// Shape for p mod Q; p must be coprime to Q.
  const LocalFactorShape& shape_of(u64 p) const;
  /// max over classes of sum_k |e_k| / phi * P^{-(k-2)}, the per-prime weight
  /// against p^{-2} once p > P. Throws if some class keeps a k = 1 term.
  double tail_weight(u64 prime_bound) const;

 private:
  u64 modulus_ = 0;
  u64 phi_ = 0;
  std::vector<LocalFactorShape> shapes_;
  std::vector<std::int32_t> class_index_;  // residue -> position in shapes_, -1 off units
};

/// 1.25506 / (P log P): bound for sum_{p > P} 1/(2 p^2) from pi(x) < 1.25506 x / log x.
double truncation_error_bound(u64 prime_bound);

/// A_{B_q}(1)^{1/phi(Q_q)} truncated to primes <= P, with its tail interval.
EulerProductEstimate euler_product_A(const PrimePower& q, u64 prime_bound, unsigned threads = 1);

/// prod over nonprincipal chi mod Q_q of L(1, chi)^{w(chi)/phi(Q_q)}.
double L_product(const PrimePower& q, unsigned threads = 1);

EulerProductEstimate G_value(const PrimePower& q, u64 prime_bound, unsigned threads = 1);

/// Everything that goes into C_q, broken into its printed sub-factors.
struct ConstantReport {
  u64 q = 0;
  u64 prime_bound = 0;
  Rational beta;
  double gamma_of_beta = 0.0;
  /// 3 / (2 Gamma(beta_q)) * prod_{p | Q_q} (1 - 1/p)^{beta_q}
  double gamma_prefactor = 0.0;
  double l_product = 0.0;
  EulerProductEstimate a_product_root;
  EulerProductEstimate g_value;
  EulerProductEstimate c_value;
  double tail_bound = 0.0;
};

/// Supported-range check for the constants pipeline.
bool constants_supported(const PrimePower& q, const ResidueLimits& limits = {});

ConstantReport leading_constant(const PrimePower& q, u64 prime_bound = kDefaultPrimeBound, unsigned threads = 1);
EulerProductEstimate leading_constant_C(const PrimePower& q, u64 prime_bound = kDefaultPrimeBound,
                                        unsigned threads = 1);

/// C_3 from 3 / (4 sqrt 2) prod_{p = 3 mod 4} (1 - p^{-2})^{1/2}, independent of
/// the character machinery.
EulerProductEstimate closed_form_C3(u64 prime_bound = kDefaultPrimeBound, unsigned threads = 1);

/// g_q for the integers all of whose prime factors are 1 mod q (q even >= 4).
EulerProductEstimate landau_g(u64 modulus, u64 prime_bound = kDefaultPrimeBound, unsigned threads = 1);

/// Gamma(x) for x > 0, relative error below 1e-13.
double gamma_function(double x);

}  // namespace lpf
