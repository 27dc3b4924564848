#include "lpf/constants.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "lpf/arith.hpp"
#include "lpf/characters.hpp"
#include "lpf/error.hpp"
#include "lpf/parallel.hpp"

namespace lpf {

namespace {

// Integer coefficient of one local term: a constraint on chi_l and its
// multiplier in [chi_l = chi_0] l^m (l-1) - [chi_l^{l-1} = chi_0] l^m + 1.
enum class Constraint { principal, order_divides, none };

struct LocalTerm {
  Constraint constraint;
  std::int64_t coefficient;
};

std::vector<LocalTerm> local_terms(u64 ell, unsigned m) {
  if (ell == 2) return {{Constraint::none, 1}};  // the local sum is identically 1
  const auto ell_m = static_cast<std::int64_t>(*arith::checked_pow(ell, m));
  return {{Constraint::principal, ell_m * static_cast<std::int64_t>(ell - 1)},
          {Constraint::order_divides, -ell_m},
          {Constraint::none, 1}};
}

bool satisfies(const DirichletCharacter& chi_ell, u64 ell, Constraint c) {
  switch (c) {
    case Constraint::principal: return chi_ell.is_principal();
    case Constraint::order_divides: return chi_ell.pow(ell - 1).is_principal();
    case Constraint::none: return true;
  }
  return false;
}

std::vector<ShapeTerm> simplify(const std::map<unsigned, std::int64_t>& exponents) {
  std::vector<ShapeTerm> terms;
  for (const auto& [k, e] : exponents) {
    if (e != 0) terms.push_back({k, e});
  }
  return terms;
}

struct PrimeFactorInfo {
  u64 ell;
  unsigned m;
  u64 local_modulus;
};

std::vector<PrimeFactorInfo> prime_factors_of_Q(const PrimePower& q) {
  std::vector<PrimeFactorInfo> out;
  for (u64 ell : arith::primes_up_to(q.value() - 1)) {
    const unsigned m = m_exponent(ell, q);
    out.push_back({ell, m, *arith::checked_pow(ell, m + 1)});
  }
  return out;
}

void require_supported(const PrimePower& q, const ResidueLimits& limits) {
  if (q.value() < 3 || !residue_supported(q, limits)) {
    fail(ErrorKind::unsupported_q, "q = " + std::to_string(q.value()) + " is outside the supported range");
  }
}

// Sum over the choice tree of local terms: visit(choice indices).
template <typename Visit>
void for_each_choice(const std::vector<std::vector<LocalTerm>>& terms, Visit&& visit) {
  std::vector<std::size_t> choice(terms.size(), 0);
  while (true) {
    visit(choice);
    std::size_t i = 0;
    for (; i < terms.size(); ++i) {
      if (++choice[i] < terms[i].size()) break;
      choice[i] = 0;
    }
    if (i == terms.size()) return;
  }
}

}  // namespace

double EulerProductEstimate::lower() const { return midpoint * std::exp(-log_error_bound); }
double EulerProductEstimate::upper() const { return midpoint * std::exp(log_error_bound); }

LocalFactorShape residue_class_factor(const PrimePower& q, u64 residue, const ResidueLimits& limits) {
  require_supported(q, limits);
  const u64 modulus = modulus_Q(q, limits);
  if (std::gcd(residue % modulus, modulus) != 1) {
    fail(ErrorKind::invalid_input, "residue_class_factor: class is not reduced mod Q_q");
  }
  const auto info = prime_factors_of_Q(q);
  const auto group = character_group(modulus, limits.max_phi);
  const auto characters = group.characters();

  // restrictions[i][j]: chi_i restricted to the j-th prime factor of Q.
  std::vector<std::vector<DirichletCharacter>> restrictions;
  restrictions.reserve(characters.size());
  for (const auto& chi : characters) {
    std::vector<DirichletCharacter> parts;
    for (const auto& f : info) parts.push_back(restriction_component(chi, f.ell));
    restrictions.push_back(std::move(parts));
  }

  std::vector<std::vector<LocalTerm>> terms;
  for (const auto& f : info) terms.push_back(local_terms(f.ell, f.m));

  std::map<unsigned, std::int64_t> exponents;
  for_each_choice(terms, [&](const std::vector<std::size_t>& choice) {
    std::int64_t coefficient = 1;
    for (std::size_t j = 0; j < info.size(); ++j) coefficient *= terms[j][choice[j]].coefficient;
    std::vector<DirichletCharacter> subgroup;
    for (std::size_t i = 0; i < characters.size(); ++i) {
      bool keep = true;
      for (std::size_t j = 0; j < info.size() && keep; ++j) {
        keep = satisfies(restrictions[i][j], info[j].ell, terms[j][choice[j]].constraint);
      }
      if (keep) subgroup.push_back(characters[i]);
    }
    const auto image = image_size(subgroup, residue);
    exponents[static_cast<unsigned>(image.k)] += coefficient * static_cast<std::int64_t>(image.multiplicity);
  });
  if (residue_set_B(q, limits).contains(residue)) {
    exponents[1] -= static_cast<std::int64_t>(group.size());
  }
  return {residue % modulus, simplify(exponents)};
}

FactorShapeTable FactorShapeTable::build(const PrimePower& q, const ResidueLimits& limits) {
  require_supported(q, limits);
  FactorShapeTable table;
  table.modulus_ = modulus_Q(q, limits);
  table.phi_ = euler_phi(table.modulus_);
  const auto info = prime_factors_of_Q(q);
  const auto classes_b = residue_set_B(q, limits);

  // Per prime factor: local image sizes k_l[term][b] and subgroup sizes.
  struct LocalData {
    std::vector<LocalTerm> terms;
    std::vector<std::vector<u64>> image;  // [term][b mod l^{m+1}]
    std::vector<u64> subgroup_size;       // [term]
  };
  std::vector<LocalData> locals;
  for (const auto& f : info) {
    LocalData data;
    data.terms = local_terms(f.ell, f.m);
    const CharacterGroup local_group(f.local_modulus);
    const auto local_chars = local_group.characters();
    for (const auto& term : data.terms) {
      std::vector<DirichletCharacter> subgroup;
      for (const auto& chi : local_chars) {
        if (satisfies(chi, f.ell, term.constraint)) subgroup.push_back(chi);
      }
      std::vector<u64> image(f.local_modulus, 0);
      for (u64 b = 1; b < f.local_modulus; ++b) {
        if (b % f.ell != 0) image[b] = image_size(subgroup, b).k;
      }
      data.image.push_back(std::move(image));
      data.subgroup_size.push_back(subgroup.size());
    }
    locals.push_back(std::move(data));
  }

  std::vector<std::vector<LocalTerm>> terms;
  for (const auto& l : locals) terms.push_back(l.terms);

  table.class_index_.assign(table.modulus_, -1);
  for (u64 r = 1; r < table.modulus_; ++r) {
    if (std::gcd(r, table.modulus_) != 1) continue;
    std::map<unsigned, std::int64_t> exponents;
    for_each_choice(terms, [&](const std::vector<std::size_t>& choice) {
      std::int64_t coefficient = 1;
      u64 k = 1;
      u64 size = 1;
      for (std::size_t j = 0; j < info.size(); ++j) {
        const auto& l = locals[j];
        coefficient *= l.terms[choice[j]].coefficient;
        k = std::lcm(k, l.image[choice[j]][r % info[j].local_modulus]);
        size *= l.subgroup_size[choice[j]];
      }
      exponents[static_cast<unsigned>(k)] += coefficient * static_cast<std::int64_t>(size / k);
    });
    if (classes_b.contains(r)) exponents[1] -= static_cast<std::int64_t>(table.phi_);
    table.class_index_[r] = static_cast<std::int32_t>(table.shapes_.size());
    table.shapes_.push_back({r, simplify(exponents)});
  }
  return table;
}

const LocalFactorShape& FactorShapeTable::shape_of(u64 p) const {
  const auto index = class_index_[p % modulus_];
  if (index < 0) fail(ErrorKind::invalid_input, "shape_of: p divides Q_q");
  return shapes_[static_cast<std::size_t>(index)];
}

double FactorShapeTable::tail_weight(u64 prime_bound) const {
  const double inv_p = 1.0 / static_cast<double>(prime_bound);
  double worst = 0.0;
  for (const auto& shape : shapes_) {
    double weight = 0.0;
    for (const auto& t : shape.terms) {
      if (t.k < 2) {
        fail(ErrorKind::unsupported_q, "class " + std::to_string(shape.residue) +
                                           " keeps a (1 - p^{-s}) factor; the product would not converge");
      }
      weight += std::abs(static_cast<double>(t.exponent)) / static_cast<double>(phi_) *
                std::pow(inv_p, static_cast<double>(t.k - 2));
    }
    worst = std::max(worst, weight);
  }
  // |log(1 - t)| <= t / (1 - t) with t <= p^{-2} < P^{-2}.
  return worst / (1.0 - inv_p * inv_p);
}

double truncation_error_bound(u64 prime_bound) {
  if (prime_bound < 100) fail(ErrorKind::invalid_input, "truncation_error_bound: P must be >= 100");
  const double p = static_cast<double>(prime_bound);
  return 1.25506 / (p * std::log(p));
}

namespace {

constexpr u64 kPrimeBlock = u64{1} << 20;

// exp of (1/phi) sum_{p <= P, p not | Q} sum_k e_k log(1 - p^{-k}), with the
// per-block partial sums reduced in block order.
double truncated_log_product(const FactorShapeTable& table, u64 prime_bound, unsigned threads) {
  const std::size_t blocks = arith::prime_block_count(prime_bound, kPrimeBlock);
  std::vector<double> partial(blocks, 0.0);
  arith::for_each_prime_block(prime_bound, kPrimeBlock, threads, [&](std::size_t b, std::span<const u64> primes) {
    CompensatedSum sum;
    for (u64 p : primes) {
      if (table.modulus() % p == 0) continue;
      const double pd = static_cast<double>(p);
      for (const auto& t : table.shape_of(p).terms) {
        sum.add(static_cast<double>(t.exponent) * std::log1p(-std::pow(pd, -static_cast<double>(t.k))));
      }
    }
    partial[b] = sum.value();
  });
  CompensatedSum total;
  for (double v : partial) total.add(v);
  return total.value() / static_cast<double>(table.phi());
}

}  // namespace

EulerProductEstimate euler_product_A(const PrimePower& q, u64 prime_bound, unsigned threads) {
  if (prime_bound < 100) fail(ErrorKind::invalid_input, "euler_product_A: P must be >= 100");
  const auto table = FactorShapeTable::build(q);
  const double weight = table.tail_weight(prime_bound);
  EulerProductEstimate out;
  out.midpoint = std::exp(truncated_log_product(table, prime_bound, threads));
  // The tail sum of p^{-2} is twice the bounded sum of p^{-2}/2.
  out.log_error_bound = 2.0 * weight * truncation_error_bound(prime_bound);
  out.prime_bound = prime_bound;
  return out;
}

double L_product(const PrimePower& q, unsigned threads) {
  const ResidueLimits limits;
  require_supported(q, limits);
  const auto group = character_group(modulus_Q(q, limits), limits.max_phi);
  const auto values = L1_all(group, threads);
  CompensatedSum log_sum;
  for (std::size_t i = 0; i < group.size(); ++i) {
    const auto chi = group.character(i);
    if (chi.is_principal()) continue;
    const std::size_t partner = group.index_of(chi.conj());
    if (partner < i) continue;  // counted with its conjugate
    const auto weight = static_cast<double>(class_weight(chi, q));
    if (partner == i) {
      if (values[i].real() <= 0.0 || std::abs(values[i].imag()) > 1e-9 * std::abs(values[i])) {
        throw std::logic_error("L(1, chi) of a real character is not a positive real");
      }
      log_sum.add(weight * std::log(values[i].real()));
    } else {
      // w(chi) = w(conj chi) and L(1, conj chi) = conj L(1, chi).
      log_sum.add(2.0 * weight * std::log(std::abs(values[i])));
    }
  }
  return std::exp(log_sum.value() / static_cast<double>(group.size()));
}

namespace {

// Independent factors other than the Euler product are evaluated to ~1e-12
// relative; their error is folded into the interval.
constexpr double kFactorSlack = 2e-12;

double prefactor_from_primes(const PrimePower& q, const Rational& beta_q) {
  double log_sum = 0.0;
  for (const auto& f : factorize(modulus_Q(q)).factors) {
    log_sum += std::log1p(-1.0 / static_cast<double>(f.prime));
  }
  return std::exp(beta_q.to_double() * log_sum);
}

}  // namespace

bool constants_supported(const PrimePower& q, const ResidueLimits& limits) {
  return q.value() >= 3 && residue_supported(q, limits);
}

EulerProductEstimate G_value(const PrimePower& q, u64 prime_bound, unsigned threads) {
  return leading_constant(q, prime_bound, threads).g_value;
}

ConstantReport leading_constant(const PrimePower& q, u64 prime_bound, unsigned threads) {
  require_supported(q, {});
  ConstantReport report;
  report.q = q.value();
  report.prime_bound = prime_bound;
  report.beta = beta(q);
  report.gamma_of_beta = gamma_function(report.beta.to_double());
  const double local = prefactor_from_primes(q, report.beta);
  report.gamma_prefactor = 3.0 / (2.0 * report.gamma_of_beta) * local;
  report.l_product = L_product(q, threads);
  report.a_product_root = euler_product_A(q, prime_bound, threads);
  report.tail_bound = report.a_product_root.log_error_bound;

  report.g_value.midpoint = report.a_product_root.midpoint * local * report.l_product;
  report.g_value.log_error_bound = report.tail_bound + kFactorSlack;
  report.g_value.prime_bound = prime_bound;

  report.c_value.midpoint = 3.0 / (2.0 * report.gamma_of_beta) * report.g_value.midpoint;
  report.c_value.log_error_bound = report.g_value.log_error_bound + kFactorSlack / 2;
  report.c_value.prime_bound = prime_bound;
  return report;
}

EulerProductEstimate leading_constant_C(const PrimePower& q, u64 prime_bound, unsigned threads) {
  return leading_constant(q, prime_bound, threads).c_value;
}

EulerProductEstimate closed_form_C3(u64 prime_bound, unsigned threads) {
  if (prime_bound < 100) fail(ErrorKind::invalid_input, "closed_form_C3: P must be >= 100");
  const std::size_t blocks = arith::prime_block_count(prime_bound, kPrimeBlock);
  std::vector<double> partial(blocks, 0.0);
  arith::for_each_prime_block(prime_bound, kPrimeBlock, threads, [&](std::size_t b, std::span<const u64> primes) {
    CompensatedSum sum;
    for (u64 p : primes) {
      if (p % 4 != 3) continue;
      const double pd = static_cast<double>(p);
      sum.add(0.5 * std::log1p(-1.0 / (pd * pd)));
    }
    partial[b] = sum.value();
  });
  CompensatedSum total;
  for (double v : partial) total.add(v);
  const double inv_p = 1.0 / static_cast<double>(prime_bound);
  EulerProductEstimate out;
  out.midpoint = 3.0 / (4.0 * std::sqrt(2.0)) * std::exp(total.value());
  out.log_error_bound = 2.0 * (0.5 / (1.0 - inv_p * inv_p)) * truncation_error_bound(prime_bound) + kFactorSlack;
  out.prime_bound = prime_bound;
  return out;
}

EulerProductEstimate landau_g(u64 modulus, u64 prime_bound, unsigned threads) {
  if (modulus < 4 || modulus % 2 != 0) fail(ErrorKind::invalid_input, "landau_g: modulus must be even and >= 4");
  if (prime_bound < 100) fail(ErrorKind::invalid_input, "landau_g: P must be >= 100");
  const auto group = character_group(modulus);
  const double phi = static_cast<double>(group.size());

  // (phi/q) prod_{chi != chi_0} L(1, chi), real by conjugate pairing.
  const auto values = L1_all(group, threads);
  CompensatedSum log_l;
  for (std::size_t i = 1; i < group.size(); ++i) log_l.add(std::log(std::abs(values[i])));
  const double l_factor = std::exp((std::log(phi / static_cast<double>(modulus)) + log_l.value()) / phi);

  // prod over p not dividing q, p != 1 mod q of (1 - p^{-ord})^{1/ord}.
  std::vector<unsigned> order(modulus, 0);
  for (u64 a = 1; a < modulus; ++a) {
    if (std::gcd(a, modulus) != 1) continue;
    u64 x = a % modulus;
    unsigned k = 1;
    while (x != 1) {
      x = x * a % modulus;
      ++k;
    }
    order[a] = k;
  }
  const std::size_t blocks = arith::prime_block_count(prime_bound, kPrimeBlock);
  std::vector<double> partial(blocks, 0.0);
  arith::for_each_prime_block(prime_bound, kPrimeBlock, threads, [&](std::size_t b, std::span<const u64> primes) {
    CompensatedSum sum;
    for (u64 p : primes) {
      const unsigned k = order[p % modulus];
      if (k < 2) continue;  // p | q or p = 1 mod q
      sum.add(std::log1p(-std::pow(static_cast<double>(p), -static_cast<double>(k))) / k);
    }
    partial[b] = sum.value();
  });
  CompensatedSum total;
  for (double v : partial) total.add(v);

  const double inv_p = 1.0 / static_cast<double>(prime_bound);
  // Worst per-prime weight against p^{-2}: exponent 1/2 at ord = 2.
  const double weight = 0.5 / (1.0 - inv_p * inv_p);
  EulerProductEstimate out;
  out.midpoint = l_factor * std::exp(total.value()) / gamma_function(1.0 / phi);
  out.log_error_bound = 2.0 * weight * truncation_error_bound(prime_bound) + kFactorSlack;
  out.prime_bound = prime_bound;
  return out;
}

double gamma_function(double x) {
  if (!(x > 0.0)) fail(ErrorKind::invalid_input, "gamma_function: x must be positive");
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_function(1.0 - x));
  }
  // Lanczos approximation, g = 7, n = 9.
  static constexpr double kCoefficients[] = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const double z = x - 1.0;
  double a = kCoefficients[0];
  const double t = z + 7.5;
  for (int i = 1; i < 9; ++i) a += kCoefficients[i] / (z + i);
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

}  // namespace lpf
