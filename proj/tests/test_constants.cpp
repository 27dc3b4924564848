#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "lpf/characters.hpp"
#include "lpf/constants.hpp"
#include "lpf/error.hpp"
#include "oracles.hpp"

using namespace lpf;
using cd = std::complex<double>;
using Shape = std::vector<ShapeTerm>;

namespace {

PrimePower pp(u64 v) { return PrimePower::parse(v); }

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an lpf::Error");
  return ErrorKind::invalid_input;
}

std::vector<u64> simple_primes(u64 limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<u64> out;
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

bool relative_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

}  // namespace

TEST_CASE("gamma function") {
  CHECK(relative_close(gamma_function(0.5), std::sqrt(std::numbers::pi), 1e-14));
  CHECK(relative_close(gamma_function(1.0), 1.0, 1e-14));
  CHECK(relative_close(gamma_function(5.0), 24.0, 1e-14));
  CHECK(relative_close(gamma_function(1.0 / 3), 2.6789385347077476337, 1e-13));
  CHECK(relative_close(gamma_function(1.0 / 6), 5.5663160017802352043, 1e-13));
  CHECK(relative_close(gamma_function(0.1), 9.5135076986687318397, 1e-13));
  CHECK(relative_close(gamma_function(2.0 / 15), 7.040579121411249, 1e-13));
  CHECK(std::abs(std::cbrt(9.0) / (2 * gamma_function(1.0 / 3)) - 0.3882291057) < 1e-10);
  CHECK(kind_of([] { gamma_function(0.0); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { gamma_function(-1.5); }) == ErrorKind::invalid_input);
  auto gen = oracle::rng(3);
  for (int i = 0; i < 200; ++i) {
    const double x = 0.01 + static_cast<double>(gen() % 100000) / 10000.0;
    CHECK(relative_close(gamma_function(x + 1), x * gamma_function(x), 1e-13));
  }
}

TEST_CASE("truncation bound") {
  CHECK(truncation_error_bound(10'000'000) < 8e-9);
  CHECK(std::abs(truncation_error_bound(100'000) - 1.25506 / (1e5 * std::log(1e5))) < 1e-20);
  CHECK(std::abs(truncation_error_bound(100'000) - 1.09e-6) < 1e-8);
  CHECK(kind_of([] { truncation_error_bound(10); }) == ErrorKind::invalid_input);
  // The bound dominates sum_{p > P} 1/(2 p^2), with the tail past 1e7 covered
  // by the bound at 1e7 itself.
  const auto primes = simple_primes(10'000'000);
  double tail = truncation_error_bound(10'000'000);
  for (auto it = primes.rbegin(); it != primes.rend() && *it > 100'000; ++it) {
    tail += 0.5 / (static_cast<double>(*it) * static_cast<double>(*it));
  }
  CHECK(tail < truncation_error_bound(100'000));
}

TEST_CASE("factor shapes for single classes") {
  CHECK(residue_class_factor(pp(4), 29).terms == Shape{{2, -6}, {6, 2}});
  CHECK(residue_class_factor(pp(4), 31).terms == Shape{{6, 2}});
  CHECK(residue_class_factor(pp(4), 19).terms == Shape{{2, 6}});
  CHECK(residue_class_factor(pp(4), 1).terms.empty());
  CHECK(kind_of([] { residue_class_factor(pp(4), 3); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { residue_class_factor(pp(13), 1); }) == ErrorKind::unsupported_q);
}

TEST_CASE("factor shape tables") {
  SUBCASE("q = 4") {
    const auto table = FactorShapeTable::build(pp(4));
    CHECK(table.modulus() == 36);
    CHECK(table.phi() == 12);
    std::map<u64, Shape> expected;
    for (u64 r : {5, 29}) expected[r] = {{2, -6}, {6, 2}};
    for (u64 r : {7, 11, 23, 31}) expected[r] = {{6, 2}};
    for (u64 r : {13, 25}) expected[r] = {{3, 4}};
    for (u64 r : {19, 35}) expected[r] = {{2, 6}};
    for (u64 r : {1, 17}) expected[r] = {};
    REQUIRE(table.shapes().size() == 12);
    for (const auto& s : table.shapes()) CHECK(s.terms == expected.at(s.residue));
  }
  SUBCASE("q = 5") {
    const auto table = FactorShapeTable::build(pp(5));
    std::map<u64, Shape> expected;
    for (u64 r : {19, 35, 37, 53, 55, 71}) expected[r] = {{2, 12}};
    for (u64 r : {5, 7, 11, 13, 23, 29, 31, 43, 47, 59, 61, 67}) expected[r] = {{6, 4}};
    // The (1 - p^{-2}) exponent here is -1/2: only that sign reproduces the
    // A-product value 0.9980828307.
    for (u64 r : {41, 65}) expected[r] = {{2, -12}, {6, 4}};
    for (u64 r : {25, 49}) expected[r] = {{3, 8}};
    for (u64 r : {1, 17}) expected[r] = {};
    REQUIRE(table.shapes().size() == 24);
    for (const auto& s : table.shapes()) CHECK(s.terms == expected.at(s.residue));
  }
  SUBCASE("literal route agrees with the local route") {
    for (u64 v : {3, 4, 5, 7}) {
      const auto table = FactorShapeTable::build(pp(v));
      for (const auto& s : table.shapes()) CHECK(residue_class_factor(pp(v), s.residue).terms == s.terms);
    }
    const auto table8 = FactorShapeTable::build(pp(8));
    for (u64 r : {1, 17, 101, 1009, 44101, 88199}) {
      CHECK(residue_class_factor(pp(8), r).terms == table8.shape_of(r).terms);
    }
  }
  SUBCASE("exponents sum to zero at p^{-1} order") {
    // The k = 1 coefficient vanishes for every class, so each product converges.
    for (u64 v : {3, 4, 5, 7, 8, 9, 11}) {
      const auto table = FactorShapeTable::build(pp(v));
      for (const auto& s : table.shapes()) {
        for (const auto& t : s.terms) CHECK(t.k >= 2);
      }
      CHECK(table.tail_weight(10'000'000) <= 0.5 + 1e-6);  // k >= 3 terms add O(1/P)
    }
  }
}

TEST_CASE("shapes reproduce the raw Euler product at s = 2") {
  for (u64 v : {4, 5}) {
    const auto q = pp(v);
    const auto table = FactorShapeTable::build(q);
    const auto classes = residue_set_B(q);
    const auto group = character_group(table.modulus());
    const auto chars = group.characters();
    std::vector<std::int64_t> weights;
    for (const auto& chi : chars) weights.push_back(class_weight(chi, q));
    double raw = 0.0;
    double simplified = 0.0;
    for (u64 p : simple_primes(10'000)) {
      if (table.modulus() % p == 0) continue;
      const double x = 1.0 / (static_cast<double>(p) * p);
      cd log_raw = classes.contains(p) ? -static_cast<double>(table.phi()) * std::log(1.0 - x) : 0.0;
      for (std::size_t i = 0; i < chars.size(); ++i) {
        log_raw += static_cast<double>(weights[i]) * std::log(1.0 - chars[i](p) * x);
      }
      CHECK(std::abs(log_raw.imag()) < 1e-12);
      raw += log_raw.real();
      for (const auto& t : table.shape_of(p).terms) {
        simplified += static_cast<double>(t.exponent) * std::log1p(-std::pow(x, static_cast<double>(t.k)));
      }
    }
    CHECK(relative_close(std::exp(simplified), std::exp(raw), 1e-10));
  }
}

TEST_CASE("Euler product for A") {
  const auto a3 = euler_product_A(pp(3), 1'000'000);
  double direct = 0.0;
  for (u64 p : simple_primes(1'000'000)) {
    if (p % 4 == 3) direct += 0.5 * std::log1p(-1.0 / (static_cast<double>(p) * p));
  }
  CHECK(relative_close(a3.midpoint, std::exp(direct), 1e-13));
  CHECK(std::abs(euler_product_A(pp(3), 10'000'000).midpoint - 0.92526) < 5e-6);
  CHECK(kind_of([] { euler_product_A(pp(3), 50); }) == ErrorKind::invalid_input);

  SUBCASE("nested intervals and convergence") {
    for (u64 v : {3, 4, 5, 7, 8, 9, 11}) {
      const auto coarse = euler_product_A(pp(v), 100'000);
      const auto fine = euler_product_A(pp(v), 10'000'000);
      CHECK(coarse.lower() <= fine.lower());
      CHECK(fine.upper() <= coarse.upper());
      if (v == 4) continue;  // mixed-sign exponents; not monotone in P
      std::vector<double> mids;
      for (u64 p : {1000, 10'000, 100'000, 1'000'000, 10'000'000}) mids.push_back(euler_product_A(pp(v), p).midpoint);
      const bool down = mids[1] < mids[0];
      for (std::size_t i = 1; i < mids.size(); ++i) CHECK((mids[i] < mids[i - 1]) == down);
    }
  }
  SUBCASE("thread count does not change the result") {
    const auto one = euler_product_A(pp(5), 3'000'000, 1);
    const auto three = euler_product_A(pp(5), 3'000'000, 3);
    CHECK(one.midpoint == three.midpoint);
  }
}

TEST_CASE("L products and G") {
  CHECK(relative_close(L_product(pp(3)), std::sqrt(std::numbers::pi / 4), 1e-13));
  const auto r4 = leading_constant(pp(4), 1'000'000);
  CHECK(relative_close(r4.g_value.midpoint,
                       std::pow(3.0, -1.0 / 3) * r4.a_product_root.midpoint * r4.l_product, 1e-13));
  const auto r5 = leading_constant(pp(5), 1'000'000);
  CHECK(relative_close(r5.g_value.midpoint,
                       std::pow(3.0, -1.0 / 6) * r5.a_product_root.midpoint * r5.l_product, 1e-13));
  CHECK(relative_close(r5.gamma_prefactor, std::pow(3.0, 5.0 / 6) / (2 * gamma_function(1.0 / 6)), 1e-13));

  // G_3 = sqrt(pi/8) prod (1 - p^-2)^{1/2}, against the closed form for C_3.
  const auto g3 = G_value(pp(3), 1'000'000);
  const auto c3 = closed_form_C3(1'000'000);
  const double g3_closed = c3.midpoint * 2 * gamma_function(0.5) / 3;
  CHECK(relative_close(g3.midpoint, g3_closed, 1e-12));
  CHECK(relative_close(g3.midpoint, std::sqrt(std::numbers::pi / 8) * euler_product_A(pp(3), 1'000'000).midpoint,
                       1e-13));
  CHECK(kind_of([] { L_product(pp(2)); }) == ErrorKind::unsupported_q);
}

TEST_CASE("L product exponents are conjugation-closed integers") {
  for (u64 v : {4, 5, 7}) {
    const auto q = pp(v);
    const auto group = character_group(modulus_Q(q));
    const auto b = residue_set_B(q);
    for (std::size_t i = 0; i < group.size(); i += 7) {
      const auto chi = group.character(i);
      const cd w = char_sum_over_B_bruteforce(chi.conj(), b);
      CHECK(std::abs(w.imag()) < 1e-9);
      CHECK(std::abs(w.real() - static_cast<double>(class_weight(chi, q))) < 1e-9);
      CHECK(class_weight(chi.conj(), q) == class_weight(chi, q));
    }
  }
}

TEST_CASE("leading constants") {
  const auto c3 = leading_constant(pp(3));
  const auto c4 = leading_constant(pp(4));
  const auto c5 = leading_constant(pp(5));
  CHECK(std::abs(c3.c_value.midpoint - 0.490694) < 2e-6);
  CHECK(std::abs(c4.c_value.midpoint - 0.4200344) < 2e-7);
  CHECK(std::abs(c5.c_value.midpoint - 0.2095134) < 2e-6);
  CHECK(c3.beta == Rational(1, 2));
  CHECK(c4.tail_bound <= 8e-9);
  CHECK(c4.c_value.contains(c4.c_value.midpoint));
  CHECK(leading_constant_C(pp(4)).midpoint == c4.c_value.midpoint);

  const auto closed = closed_form_C3();
  CHECK(std::max(closed.lower(), c3.c_value.lower()) <= std::min(closed.upper(), c3.c_value.upper()));

  // Larger q: all factors finite and positive, intervals tight.
  for (u64 v : {7, 8, 9}) {
    const auto r = leading_constant(pp(v), 1'000'000);
    CHECK(r.c_value.midpoint > 0);
    CHECK(r.c_value.midpoint < c5.c_value.midpoint);
    CHECK(r.tail_bound < 1e-6);
  }
  CHECK(kind_of([] { leading_constant(pp(13)); }) == ErrorKind::unsupported_q);
  CHECK_FALSE(constants_supported(pp(2)));
  CHECK(constants_supported(pp(11)));
}

TEST_CASE("Landau constant g_4") {
  const auto g4 = landau_g(4);
  CHECK(std::abs(g4.midpoint - 0.32713) < 5e-6);
  const auto c3 = closed_form_C3();
  CHECK(std::abs(c3.midpoint - 1.5 * g4.midpoint) <= c3.upper() - c3.midpoint + 1.5 * (g4.upper() - g4.midpoint));
  CHECK(kind_of([] { landau_g(5); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { landau_g(2); }) == ErrorKind::invalid_input);
  CHECK(landau_g(6, 1'000'000).midpoint > 0);
}
