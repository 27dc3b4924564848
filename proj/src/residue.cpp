#include "lpf/residue.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "lpf/arith.hpp"
#include "lpf/error.hpp"

namespace lpf {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) fail(ErrorKind::capacity, "rational overflow");
  return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make_reduced(i128 num, i128 den) {
  if (den == 0) fail(ErrorKind::invalid_input, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

std::vector<u64> primes_below(u64 q) {
  return arith::primes_up_to(q - 1);
}

u64 local_modulus(u64 ell, const PrimePower& q) {
  return *arith::checked_pow(ell, m_exponent(ell, q) + 1);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den == 0) fail(ErrorKind::invalid_input, "rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const std::int64_t g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

std::string Rational::to_string() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                      static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return a + Rational(-b.num_, b.den_);
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
}

ResidueClassSet::ResidueClassSet(u64 modulus, std::vector<u64> classes)
    : modulus_(modulus), classes_(std::move(classes)) {
  if (modulus_ == 0) fail(ErrorKind::invalid_input, "residue class set needs a positive modulus");
  std::sort(classes_.begin(), classes_.end());
  classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
  for (u64 b : classes_) {
    if (b >= modulus_ || std::gcd(b, modulus_) != 1) {
      if (!(modulus_ == 1 && b == 0)) {
        fail(ErrorKind::invalid_input, "class " + std::to_string(b) + " is not a reduced residue mod " +
                                           std::to_string(modulus_));
      }
    }
  }
}

bool ResidueClassSet::contains(u64 n) const {
  return std::binary_search(classes_.begin(), classes_.end(), n % modulus_);
}

u64 modulus_Q(const PrimePower& q, const ResidueLimits& limits) {
  if (q.value() < 3) fail(ErrorKind::invalid_input, "Q_q requires q >= 3");
  u64 modulus = 1;
  for (u64 ell : primes_below(q.value())) {
    const auto local = arith::checked_pow(ell, m_exponent(ell, q) + 1);
    const auto next = local ? arith::checked_mul(modulus, *local) : std::nullopt;
    if (!next || *next > limits.max_modulus) {
      fail(ErrorKind::capacity, "Q_" + std::to_string(q.value()) + " exceeds the supported modulus");
    }
    modulus = *next;
  }
  return modulus;
}

bool residue_supported(const PrimePower& q, const ResidueLimits& limits) {
  if (q.value() < 3) return false;
  try {
    return euler_phi(modulus_Q(q, limits)) <= limits.max_phi;
  } catch (const Error&) {
    return false;
  }
}

LocalClassData local_class_data(u64 ell, const PrimePower& q) {
  const unsigned m = m_exponent(ell, q);
  const u64 modulus = local_modulus(ell, q);
  std::vector<u64> full, h, b;
  for (u64 r = 1; r < modulus; ++r) {
    if (r % ell == 0) continue;
    full.push_back(r);
    if (r % ell == 1) {
      h.push_back(r);
    } else {
      b.push_back(r);
    }
  }
  b.push_back(1);
  return LocalClassData{ell,
                        m,
                        ResidueClassSet(modulus, std::move(full)),
                        ResidueClassSet(modulus, std::move(h)),
                        ResidueClassSet(modulus, {1}),
                        ResidueClassSet(modulus, std::move(b))};
}

ResidueClassSet residue_set_B(const PrimePower& q, const ResidueLimits& limits) {
  const u64 modulus = modulus_Q(q, limits);
  if (euler_phi(modulus) > limits.max_phi) {
    fail(ErrorKind::capacity, "phi(Q_" + std::to_string(q.value()) + ") exceeds the supported cap");
  }
  u64 acc_modulus = 1;
  std::vector<u64> acc{0};
  for (u64 ell : primes_below(q.value())) {
    const auto local = local_class_data(ell, q);
    std::vector<u64> next;
    next.reserve(acc.size() * local.local_b.size());
    for (u64 r : acc) {
      for (u64 b : local.local_b.classes()) {
        next.push_back(arith::crt_pair(r, acc_modulus, b, local.local_b.modulus()));
      }
    }
    acc = std::move(next);
    acc_modulus *= local.local_b.modulus();
  }
  return ResidueClassSet(modulus, std::move(acc));
}

u64 class_count_B(const PrimePower& q) {
  u64 count = 1;
  for (u64 ell : primes_below(q.value())) {
    const u64 local = (ell - 2) * *arith::checked_pow(ell, m_exponent(ell, q)) + 1;
    const auto next = arith::checked_mul(count, local);
    if (!next) fail(ErrorKind::capacity, "B_q exceeds 64 bits");
    count = *next;
  }
  return count;
}

Rational beta(const PrimePower& q) {
  if (q.value() < 3) fail(ErrorKind::invalid_input, "beta_q requires q >= 3");
  Rational result(1);
  for (u64 ell : primes_below(q.value())) {
    const auto ell_m = arith::checked_pow(ell, m_exponent(ell, q));
    if (!ell_m) fail(ErrorKind::capacity, "beta_q: l^m exceeds 64 bits");
    const auto l = static_cast<std::int64_t>(ell);
    // (l - 2)/(l - 1) + 1/(l^m (l - 1))
    const Rational local = Rational(l - 2, l - 1) +
                           Rational(1, narrow(static_cast<i128>(*ell_m) * (l - 1)));
    result = result * local;
  }
  return result;
}

Rational beta_next(const PrimePower& q) { return beta(next_prime_power(q)); }

bool satisfies_S_at_least(u64 m, const PrimePower& q) {
  if (m == 0) fail(ErrorKind::invalid_input, "satisfies_S_at_least: m must be positive");
  if (q.value() < 3) fail(ErrorKind::invalid_input, "satisfies_S_at_least: q must be >= 3");
  if (m <= 2) return true;
  for (const auto& [p, r] : factorize(m).factors) {
    if (p == 2) {
      if (r >= 2) return false;  // 4 | m
      continue;
    }
    if (p <= q.value()) return false;
    // Only primes l with p = 1 (mod l) can violate the congruence condition.
    for (const auto& f : factorize(p - 1).factors) {
      const u64 ell = f.prime;
      if (ell >= q.value()) continue;
      const auto level = arith::checked_pow(ell, m_exponent(ell, q) + 1);
      if (!level || (p - 1) % *level != 0) return false;
    }
  }
  return true;
}

bool s_not_two(u64 n) {
  if (n % 4 == 0) return false;
  for (const auto& f : factorize(n).factors) {
    if (f.prime != 2 && f.prime % 4 != 1) return false;
  }
  return true;
}

}  // namespace lpf
