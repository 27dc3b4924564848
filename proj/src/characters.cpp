#include "lpf/characters.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

#include "lpf/arith.hpp"
#include "lpf/error.hpp"
#include "lpf/parallel.hpp"

namespace lpf {

namespace {

using arith::u128;
constexpr std::uint32_t kNoLog = ~std::uint32_t{0};

// e^{2 pi i num/den}, reduced to an angle in (-1/2, 1/2] turns first.
std::complex<double> unit_complex(u64 num, u64 den) {
  num %= den;
  if (num == 0) return {1.0, 0.0};
  if (2 * num == den) return {-1.0, 0.0};
  if (4 * num == den) return {0.0, 1.0};
  if (4 * num == 3 * den) return {0.0, -1.0};
  double turns = static_cast<double>(num) / static_cast<double>(den);
  if (2 * num > den) turns = -static_cast<double>(den - num) / static_cast<double>(den);
  const double angle = 2.0 * std::numbers::pi * turns;
  return {std::cos(angle), std::sin(angle)};
}

struct ComplexSum {
  CompensatedSum re, im;
  void add(std::complex<double> z) {
    re.add(z.real());
    im.add(z.imag());
  }
  std::complex<double> value() const { return {re.value(), im.value()}; }
};

u64 least_primitive_root(u64 p, unsigned e, u64 modulus) {
  const u64 order = modulus / p * (p - 1);
  const auto divisors = factorize(order).factors;
  for (u64 g = 2; g < modulus; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (const auto& f : divisors) {
      if (arith::pow_mod(g, order / f.prime, modulus) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  (void)e;
  throw std::logic_error("no primitive root found");
}

// Conductor exponent of the character component on a cyclic factor, or the
// 2-part of the conductor computed from both 2-adic factors.
u64 conductor_of(const DirichletCharacter& chi) {
  const auto& factors = chi.group().factors();
  const auto& e = chi.exponents();
  u64 conductor = 1;
  bool two_minus_one_nontrivial = false;
  u64 two_five_order = 1;
  bool has_two = false;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    const u64 component_order = f.order / std::gcd(e[i], f.order);
    switch (f.kind) {
      case CyclicFactor::Kind::odd:
        if (component_order > 1) {
          conductor *= *arith::checked_pow(f.prime, 1 + p_adic_valuation(component_order, f.prime));
        }
        break;
      case CyclicFactor::Kind::two_minus_one:
        has_two = true;
        two_minus_one_nontrivial = component_order > 1;
        break;
      case CyclicFactor::Kind::two_five:
        has_two = true;
        two_five_order = component_order;
        break;
    }
  }
  if (has_two) {
    if (two_five_order > 1) {
      conductor *= u64{1} << (p_adic_valuation(two_five_order, 2) + 2);
    } else if (two_minus_one_nontrivial) {
      conductor *= 4;
    }
  }
  return conductor;
}

// Re-express chi (which must be induced from target's modulus) on target's
// generator basis.
DirichletCharacter primitive_on(const DirichletCharacter& chi,
                                const std::shared_ptr<const UnitGroup>& target) {
  const auto& source = chi.group();
  std::vector<u64> exps;
  exps.reserve(target->factors().size());
  for (const auto& f : target->factors()) {
    // p^e || Q; the target generator is a unit mod p^f | p^e.
    u64 pe = 1;
    while (source.modulus() % (pe * f.prime) == 0) pe *= f.prime;
    const u64 a = source.lift_prime_power(pe, f.generator % pe);
    const auto v = chi.value(a);
    if (!v || f.order % v->den() != 0) throw std::logic_error("character is not induced from target modulus");
    exps.push_back(v->num() * (f.order / v->den()));
  }
  return DirichletCharacter(target, std::move(exps));
}

}  // namespace

RootOfUnity::RootOfUnity(u64 num, u64 den) {
  if (den == 0) fail(ErrorKind::invalid_input, "root of unity with zero order");
  num %= den;
  const u64 g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::complex<double> RootOfUnity::to_complex() const { return unit_complex(num_, den_); }

RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) {
  const u64 den = std::lcm(a.den_, b.den_);
  const u128 num = static_cast<u128>(a.num_) * (den / a.den_) + static_cast<u128>(b.num_) * (den / b.den_);
  return RootOfUnity(static_cast<u64>(num % den), den);
}

// ---------------------------------------------------------------------------
// UnitGroup

UnitGroup::UnitGroup(u64 modulus, u64 max_phi) : modulus_(modulus) {
  if (modulus == 0) fail(ErrorKind::invalid_input, "character modulus must be positive");
  const auto fac = factorize(modulus);
  u64 phi = 1;
  for (const auto& [p, e] : fac.factors) phi *= *arith::checked_pow(p, e - 1) * (p - 1);
  if (phi > max_phi) {
    fail(ErrorKind::capacity, "phi(" + std::to_string(modulus) + ") = " + std::to_string(phi) +
                                  " exceeds the character group cap");
  }
  order_ = phi;
  for (const auto& [p, e] : fac.factors) {
    const u64 pe = *arith::checked_pow(p, e);
    if (p == 2) {
      if (e == 1) continue;
      factors_.push_back({CyclicFactor::Kind::two_minus_one, 2, e, pe, pe - 1, 2});
      std::vector<std::uint32_t> minus_one(pe, kNoLog);
      for (u64 a = 1; a < pe; a += 2) minus_one[a] = (a % 4 == 3) ? 1 : 0;
      log_tables_.push_back(std::move(minus_one));
      if (e >= 3) {
        const u64 order = pe / 4;
        factors_.push_back({CyclicFactor::Kind::two_five, 2, e, pe, 5, order});
        std::vector<std::uint32_t> five(pe, kNoLog);
        u64 x = 1;
        for (u64 j = 0; j < order; ++j) {
          five[x] = static_cast<std::uint32_t>(j);
          five[pe - x] = static_cast<std::uint32_t>(j);
          x = x * 5 % pe;
        }
        log_tables_.push_back(std::move(five));
      }
      continue;
    }
    const u64 order = pe / p * (p - 1);
    const u64 g = least_primitive_root(p, e, pe);
    factors_.push_back({CyclicFactor::Kind::odd, p, e, pe, g, order});
    std::vector<std::uint32_t> table(pe, kNoLog);
    u64 x = 1;
    for (u64 i = 0; i < order; ++i) {
      table[x] = static_cast<std::uint32_t>(i);
      x = x * g % pe;
    }
    log_tables_.push_back(std::move(table));
  }
  for (const auto& f : factors_) exponent_ = std::lcm(exponent_, f.order);
}

bool UnitGroup::is_unit(u64 a) const { return std::gcd(a % modulus_, modulus_) == 1; }

u64 UnitGroup::log_on(std::size_t factor, u64 a) const {
  const auto v = log_tables_[factor][a % factors_[factor].modulus];
  if (v == kNoLog) fail(ErrorKind::invalid_input, "discrete log of a non-unit");
  return v;
}

std::vector<u64> UnitGroup::log(u64 a) const {
  if (!is_unit(a)) fail(ErrorKind::invalid_input, "discrete log of a non-unit");
  std::vector<u64> out(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) out[i] = log_on(i, a);
  return out;
}

std::size_t UnitGroup::log_index(u64 a) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) index = index * factors_[i].order + log_on(i, a);
  return index;
}

u64 UnitGroup::lift_prime_power(u64 prime_power, u64 residue) const {
  if (modulus_ % prime_power != 0) fail(ErrorKind::invalid_input, "lift: not a divisor of the modulus");
  return arith::crt_pair(residue % prime_power, prime_power, 1 % (modulus_ / prime_power),
                         modulus_ / prime_power);
}

u64 UnitGroup::lift(std::size_t factor, u64 residue) const {
  return lift_prime_power(factors_.at(factor).modulus, residue);
}

// ---------------------------------------------------------------------------
// DirichletCharacter

DirichletCharacter::DirichletCharacter(std::shared_ptr<const UnitGroup> group, std::vector<u64> exponents)
    : group_(std::move(group)), exponents_(std::move(exponents)) {
  if (exponents_.size() != group_->factors().size()) {
    fail(ErrorKind::invalid_input, "exponent vector does not match the generator basis");
  }
  for (std::size_t i = 0; i < exponents_.size(); ++i) exponents_[i] %= group_->factors()[i].order;
}

std::optional<RootOfUnity> DirichletCharacter::value(u64 a) const {
  if (!group_->is_unit(a)) return std::nullopt;
  const u64 n = group_->exponent();
  u128 num = 0;
  const auto& factors = group_->factors();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (exponents_[i] == 0) continue;
    num += static_cast<u128>(exponents_[i]) * group_->log_on(i, a) % factors[i].order * (n / factors[i].order);
  }
  return RootOfUnity(static_cast<u64>(num % n), n);
}

std::complex<double> DirichletCharacter::operator()(u64 a) const {
  const auto v = value(a);
  return v ? v->to_complex() : std::complex<double>{0.0, 0.0};
}

u64 DirichletCharacter::order() const {
  u64 order = 1;
  const auto& factors = group_->factors();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    order = std::lcm(order, factors[i].order / std::gcd(exponents_[i], factors[i].order));
  }
  return order;
}

bool DirichletCharacter::is_principal() const {
  return std::all_of(exponents_.begin(), exponents_.end(), [](u64 e) { return e == 0; });
}

bool DirichletCharacter::is_even() const { return value(modulus() - 1 + (modulus() == 1))->is_one(); }

DirichletCharacter DirichletCharacter::conj() const {
  std::vector<u64> e(exponents_.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const u64 order = group_->factors()[i].order;
    e[i] = (order - exponents_[i]) % order;
  }
  return DirichletCharacter(group_, std::move(e));
}

DirichletCharacter DirichletCharacter::pow(u64 k) const {
  std::vector<u64> e(exponents_.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const u64 order = group_->factors()[i].order;
    e[i] = static_cast<u64>(static_cast<u128>(exponents_[i]) * (k % order) % order);
  }
  return DirichletCharacter(group_, std::move(e));
}

DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b) {
  if (a.modulus() != b.modulus()) fail(ErrorKind::invalid_input, "product of characters with different moduli");
  std::vector<u64> e(a.exponents_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.exponents_[i] + b.exponents_[i];
  return DirichletCharacter(a.group_, std::move(e));
}

bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
  return a.modulus() == b.modulus() && a.exponents_ == b.exponents_;
}

// ---------------------------------------------------------------------------
// CharacterGroup

CharacterGroup::CharacterGroup(u64 modulus, u64 max_phi)
    : group_(std::make_shared<const UnitGroup>(modulus, max_phi)) {}

DirichletCharacter CharacterGroup::character(std::size_t index) const {
  if (index >= size()) fail(ErrorKind::invalid_input, "character index out of range");
  const auto& factors = group_->factors();
  std::vector<u64> e(factors.size());
  for (std::size_t i = factors.size(); i-- > 0;) {
    e[i] = index % factors[i].order;
    index /= factors[i].order;
  }
  return DirichletCharacter(group_, std::move(e));
}

std::size_t CharacterGroup::index_of(const DirichletCharacter& chi) const {
  if (chi.modulus() != modulus()) fail(ErrorKind::invalid_input, "character has a different modulus");
  std::size_t index = 0;
  const auto& factors = group_->factors();
  for (std::size_t i = 0; i < factors.size(); ++i) index = index * factors[i].order + chi.exponents()[i];
  return index;
}

std::vector<DirichletCharacter> CharacterGroup::characters() const {
  std::vector<DirichletCharacter> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(character(i));
  return out;
}

CharacterGroup character_group(u64 modulus, u64 max_phi) {
  if (modulus < 3) fail(ErrorKind::invalid_input, "character group modulus must be >= 3");
  return CharacterGroup(modulus, max_phi);
}

// ---------------------------------------------------------------------------
// Decomposition and character sums

DirichletCharacter restriction_component(const DirichletCharacter& chi, u64 ell) {
  const u64 q = chi.modulus();
  if (!arith::is_prime(ell) || q % ell != 0) {
    fail(ErrorKind::invalid_input, "restriction_component: l must be a prime dividing the modulus");
  }
  u64 pe = 1;
  while (q % (pe * ell) == 0) pe *= ell;
  auto local = std::make_shared<const UnitGroup>(pe);
  std::vector<u64> e;
  const auto& factors = chi.group().factors();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].prime == ell) e.push_back(chi.exponents()[i]);
  }
  return DirichletCharacter(std::move(local), std::move(e));
}

std::int64_t char_sum_over_B(const DirichletCharacter& chi_ell, u64 ell, const PrimePower& q) {
  const unsigned m = m_exponent(ell, q);
  const u64 ell_m = *arith::checked_pow(ell, m);
  if (chi_ell.modulus() != ell_m * ell) {
    fail(ErrorKind::invalid_input, "char_sum_over_B: character modulus must be l^{m(l,q)+1}");
  }
  std::int64_t sum = 1;
  if (chi_ell.is_principal()) sum += static_cast<std::int64_t>(ell_m * (ell - 1));
  if (chi_ell.pow(ell - 1).is_principal()) sum -= static_cast<std::int64_t>(ell_m);
  return sum;
}

std::complex<double> char_sum_over_B_bruteforce(const DirichletCharacter& chi, const ResidueClassSet& classes) {
  if (chi.modulus() != classes.modulus()) {
    fail(ErrorKind::invalid_input, "char_sum_over_B_bruteforce: modulus mismatch");
  }
  ComplexSum sum;
  for (u64 b : classes.classes()) sum.add(chi(b));
  return sum.value();
}

std::int64_t class_weight(const DirichletCharacter& chi, const PrimePower& q) {
  const auto bar = chi.conj();
  std::int64_t weight = 1;
  for (const auto& f : factorize(chi.modulus()).factors) {
    weight *= char_sum_over_B(restriction_component(bar, f.prime), f.prime, q);
  }
  return weight;
}

ImageSize image_size(std::span<const DirichletCharacter> subgroup, u64 p) {
  if (subgroup.empty()) fail(ErrorKind::invalid_input, "image_size: empty character set");
  const auto& first = subgroup.front();
  if (!first.group().is_unit(p)) fail(ErrorKind::invalid_input, "image_size: p is not coprime to the modulus");
  // Spot-check closure on a few products.
  std::set<std::vector<u64>> members;
  for (const auto& chi : subgroup) members.insert(chi.exponents());
  const std::size_t probe = std::min<std::size_t>(subgroup.size(), 4);
  for (std::size_t i = 0; i < probe; ++i) {
    for (std::size_t j = 0; j < probe; ++j) {
      const auto product = subgroup[i] * subgroup[subgroup.size() - 1 - j];
      if (!members.count(product.exponents())) {
        fail(ErrorKind::invalid_input, "image_size: character set is not a subgroup");
      }
    }
  }
  std::set<RootOfUnity> image;
  for (const auto& chi : subgroup) image.insert(*chi.value(p));
  const u64 k = image.size();
  if (subgroup.size() % k != 0) fail(ErrorKind::invalid_input, "image_size: character set is not a subgroup");
  return {k, subgroup.size() / k};
}

PrimitiveCharacter conductor_and_primitive(const DirichletCharacter& chi) {
  const u64 conductor = conductor_of(chi);
  auto target = std::make_shared<const UnitGroup>(conductor);
  return {conductor, primitive_on(chi, target)};
}

std::complex<double> gauss_sum(const DirichletCharacter& primitive) {
  const u64 q = primitive.modulus();
  if (q == 1 || conductor_of(primitive) != q) fail(ErrorKind::invalid_input, "gauss_sum: character is not primitive");
  ComplexSum sum;
  for (u64 a = 1; a < q; ++a) {
    const auto v = primitive.value(a);
    if (!v) continue;
    // chi(a) e(a/q) = e((num q + a den) / (den q))
    const u128 den = static_cast<u128>(v->den()) * q;
    const u128 num = (static_cast<u128>(v->num()) * q + static_cast<u128>(a) * v->den()) % den;
    const u64 g = std::gcd(static_cast<u64>(num), static_cast<u64>(den));
    sum.add(unit_complex(static_cast<u64>(num) / g, static_cast<u64>(den) / g));
  }
  return sum.value();
}

namespace {

std::complex<double> primitive_L1(const DirichletCharacter& prim, std::complex<double> tau) {
  const u64 q = prim.modulus();
  const double qd = static_cast<double>(q);
  ComplexSum sum;
  const bool even = prim.is_even();
  for (u64 k = 1; k < q; ++k) {
    const auto v = prim.value(k);
    if (!v) continue;
    const auto bar = v->conj().to_complex();
    if (even) {
      const u64 folded = std::min(k, q - k);
      sum.add(bar * std::log(std::sin(std::numbers::pi * static_cast<double>(folded) / qd)));
    } else {
      sum.add(bar * static_cast<double>(k));
    }
  }
  if (even) return -tau / qd * sum.value();
  return std::complex<double>(0.0, std::numbers::pi) * tau / (qd * qd) * sum.value();
}

std::complex<double> imprimitive_correction(const DirichletCharacter& prim, u64 modulus) {
  std::complex<double> factor{1.0, 0.0};
  for (const auto& f : factorize(modulus).factors) {
    factor *= 1.0 - prim(f.prime) / static_cast<double>(f.prime);
  }
  return factor;
}

}  // namespace

std::complex<double> L1(const DirichletCharacter& chi) {
  if (chi.is_principal()) fail(ErrorKind::invalid_input, "L(1, chi_0) is a pole");
  const auto prim = conductor_and_primitive(chi);
  const auto tau = gauss_sum(prim.character);
  return primitive_L1(prim.character, tau) * imprimitive_correction(prim.character, chi.modulus());
}

namespace {

// In-place separable DFT over the mixed-radix log coordinates of `group`:
// out[y] = sum_x in[x] e(sign * sum_j x_j y_j / n_j).
void group_dft(const UnitGroup& group, std::vector<std::complex<double>>& data, int sign) {
  const auto& factors = group.factors();
  std::size_t stride = data.size();
  std::vector<std::complex<double>> line, out;
  for (const auto& f : factors) {
    const std::size_t n = f.order;
    stride /= n;
    std::vector<std::complex<double>> twiddle(n);
    for (std::size_t t = 0; t < n; ++t) twiddle[t] = unit_complex(sign > 0 ? t : (n - t) % n, n);
    line.resize(n);
    out.resize(n);
    const std::size_t block = stride * n;
    for (std::size_t base = 0; base < data.size(); base += block) {
      for (std::size_t offset = 0; offset < stride; ++offset) {
        for (std::size_t x = 0; x < n; ++x) line[x] = data[base + offset + x * stride];
        for (std::size_t y = 0; y < n; ++y) {
          ComplexSum acc;
          for (std::size_t x = 0; x < n; ++x) acc.add(line[x] * twiddle[(x * y) % n]);
          out[y] = acc.value();
        }
        for (std::size_t y = 0; y < n; ++y) data[base + offset + y * stride] = out[y];
      }
    }
  }
}

struct ConductorTables {
  std::shared_ptr<const UnitGroup> group;
  std::vector<std::complex<double>> tau;       // sum chi(a) e(a/d)
  std::vector<std::complex<double>> odd_sum;   // sum conj(chi)(k) k
  std::vector<std::complex<double>> even_sum;  // sum conj(chi)(k) log sin(k pi/d)
};

ConductorTables build_tables(u64 d) {
  ConductorTables t;
  t.group = std::make_shared<const UnitGroup>(d);
  const std::size_t n = t.group->order();
  t.tau.assign(n, {});
  t.odd_sum.assign(n, {});
  t.even_sum.assign(n, {});
  const double dd = static_cast<double>(d);
  for (u64 k = 1; k < d; ++k) {
    if (!t.group->is_unit(k)) continue;
    const std::size_t idx = t.group->log_index(k);
    t.tau[idx] = unit_complex(k, d);
    t.odd_sum[idx] = static_cast<double>(k);
    t.even_sum[idx] = std::log(std::sin(std::numbers::pi * static_cast<double>(std::min(k, d - k)) / dd));
  }
  group_dft(*t.group, t.tau, +1);
  group_dft(*t.group, t.odd_sum, -1);
  group_dft(*t.group, t.even_sum, -1);
  return t;
}

}  // namespace

std::vector<std::complex<double>> L1_all(const CharacterGroup& group, unsigned threads) {
  const std::size_t count = group.size();
  std::vector<u64> conductors(count);
  for (std::size_t i = 0; i < count; ++i) conductors[i] = conductor_of(group.character(i));
  std::vector<u64> distinct(conductors.begin(), conductors.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (!distinct.empty() && distinct.front() == 1) distinct.erase(distinct.begin());

  std::vector<ConductorTables> tables(distinct.size());
  parallel_for(distinct.size(), threads, [&](std::size_t i) { tables[i] = build_tables(distinct[i]); });

  std::vector<std::complex<double>> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    const auto chi = group.character(i);
    if (chi.is_principal()) {
      out[i] = {std::nan(""), std::nan("")};
      return;
    }
    const auto pos = std::lower_bound(distinct.begin(), distinct.end(), conductors[i]) - distinct.begin();
    const auto& t = tables[pos];
    const auto prim = primitive_on(chi, t.group);
    std::size_t idx = 0;
    const auto& factors = t.group->factors();
    for (std::size_t j = 0; j < factors.size(); ++j) idx = idx * factors[j].order + prim.exponents()[j];
    const double d = static_cast<double>(conductors[i]);
    std::complex<double> value;
    if (prim.is_even()) {
      value = -t.tau[idx] / d * t.even_sum[idx];
    } else {
      value = std::complex<double>(0.0, std::numbers::pi) * t.tau[idx] / (d * d) * t.odd_sum[idx];
    }
    out[i] = value * imprimitive_correction(prim, group.modulus());
  });
  return out;
}

}  // namespace lpf
