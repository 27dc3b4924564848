#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "lpf/error.hpp"
#include "lpf/mgroup.hpp"
#include "oracles.hpp"

using namespace lpf;

namespace {

std::vector<u64> values(const PrimaryDecomposition& d) {
  std::vector<u64> out;
  for (const auto& c : d.components) out.push_back(c.value());
  return out;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an lpf::Error");
  return ErrorKind::invalid_input;
}

}  // namespace

TEST_CASE("prime powers") {
  CHECK(PrimePower(2, 3).value() == 8);
  CHECK(PrimePower::from_value(9)->base() == 3);
  CHECK(PrimePower::from_value(9)->exponent() == 2);
  CHECK_FALSE(PrimePower::from_value(6));
  CHECK_FALSE(PrimePower::from_value(1));
  CHECK_FALSE(PrimePower::from_value(0));
  CHECK(PrimePower::from_value(4294967291ULL));  // largest 32-bit prime
  CHECK(PrimePower::from_value(u64{1} << 63)->exponent() == 63);
  CHECK(kind_of([] { PrimePower(4, 1); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { PrimePower(3, 0); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { PrimePower(3, 41); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { PrimePower::parse(12); }) == ErrorKind::invalid_input);
  for (u64 v = 2; v < 3000; ++v) {
    const auto f = oracle::trial_factor(v);
    CHECK(PrimePower::from_value(v).has_value() == (f.size() == 1));
  }
}

TEST_CASE("factorize") {
  CHECK(factorize(1).factors.empty());
  CHECK(factorize(40).factors == std::vector<PrimeFactor>{{2, 3}, {5, 1}});
  CHECK(factorize(36).factors == std::vector<PrimeFactor>{{2, 2}, {3, 2}});
  CHECK(kind_of([] { factorize(0); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { factorize(kFactorizeBound + 1); }) == ErrorKind::capacity);

  SUBCASE("large semiprimes and prime powers") {
    const u64 p = 2147483647ULL;
    const u64 q = 2147483629ULL;
    CHECK(factorize(p * q).factors == std::vector<PrimeFactor>{{q, 1}, {p, 1}});
    CHECK(factorize(1000000007ULL * 998244353ULL).factors ==
          std::vector<PrimeFactor>{{998244353ULL, 1}, {1000000007ULL, 1}});
    CHECK(factorize(kFactorizeBound).factors ==
          std::vector<PrimeFactor>{{7, 2}, {73, 1}, {127, 1}, {337, 1}, {92737, 1}, {649657, 1}});
    CHECK(factorize(u64{3486784401}).factors == std::vector<PrimeFactor>{{3, 20}});
  }

  SUBCASE("random products rebuild n") {
    auto gen = oracle::rng(1);
    for (int trial = 0; trial < 2000; ++trial) {
      const u64 n = gen() % (u64{1} << (8 + trial % 55)) + 1;
      const auto f = factorize(n);
      u64 product = 1;
      for (std::size_t i = 0; i < f.factors.size(); ++i) {
        if (f.factors[i].prime < 10'000'000'000ULL) CHECK(oracle::is_prime(f.factors[i].prime));
        if (i > 0) CHECK(f.factors[i - 1].prime < f.factors[i].prime);
        for (unsigned k = 0; k < f.factors[i].multiplicity; ++k) product *= f.factors[i].prime;
      }
      CHECK(product == n);
    }
  }

  SUBCASE("against trial division") {
    for (u64 n = 1; n <= 20000; ++n) {
      const auto f = factorize(n);
      const auto expected = oracle::trial_factor(n);
      REQUIRE(f.factors.size() == expected.size());
      std::size_t i = 0;
      for (const auto& [p, r] : expected) {
        CHECK(f.factors[i].prime == p);
        CHECK(f.factors[i].multiplicity == r);
        ++i;
      }
    }
  }
}

TEST_CASE("valuations and phi") {
  CHECK(p_adic_valuation(21, 3) == 1);
  CHECK(p_adic_valuation(5, 3) == 0);
  CHECK(p_adic_valuation(40, 2) == 3);
  for (u64 n = 1; n <= 3000; ++n) CHECK(euler_phi(n) == oracle::phi(n));
}

TEST_CASE("primary decomposition examples") {
  CHECK(values(primary_decomposition(5)) == std::vector<u64>{4});
  CHECK(values(primary_decomposition(8)) == std::vector<u64>{2, 2});
  CHECK(values(primary_decomposition(13)) == std::vector<u64>{3, 4});
  CHECK(values(primary_decomposition(9)) == std::vector<u64>{2, 3});
  CHECK(values(primary_decomposition(4)) == std::vector<u64>{2});
  CHECK(values(primary_decomposition(16)) == std::vector<u64>{2, 4});
  CHECK(kind_of([] { primary_decomposition(1); }) == ErrorKind::trivial_group);
  CHECK(kind_of([] { primary_decomposition(2); }) == ErrorKind::trivial_group);
}

TEST_CASE("primary decomposition matches the group structure") {
  for (u64 n = 3; n <= 2500; ++n) {
    INFO("n = " << n);
    CHECK(values(primary_decomposition(n)) == oracle::group_primary_components(n));
  }
}

TEST_CASE("least primary factor") {
  CHECK(least_primary_factor(13).value() == 3);
  CHECK(least_primary_factor(17).value() == 16);
  CHECK(least_primary_factor(9).value() == 2);
  CHECK(least_primary_factor(3).value() == 2);
  CHECK(kind_of([] { least_primary_factor(1); }) == ErrorKind::undefined_s);
  CHECK(kind_of([] { least_primary_factor(2); }) == ErrorKind::undefined_s);
  CHECK(least_primary_of_odd_prime(65537) == 65536);
  CHECK(least_primary_of_odd_prime(13) == 3);
  CHECK(kind_of([] { least_primary_of_odd_prime(15); }) == ErrorKind::invalid_input);
  for (u64 n = 3; n <= 2500; ++n) CHECK(least_primary_factor(n).value() == oracle::least_primary_bruteforce(n));
}

TEST_CASE("S(p^r) does not depend on r") {
  for (u64 p = 3; p < 100; p += 2) {
    if (!oracle::is_prime(p)) continue;
    const u64 s = least_primary_factor(p).value();
    CHECK(least_primary_factor(p * p).value() == std::min(s, p));
    CHECK(least_primary_factor(p * p * p).value() == std::min(s, p));
  }
}

TEST_CASE("decomposition properties") {
  SUBCASE("product of components is phi(n)") {
    for (u64 n = 3; n <= 100000; ++n) {
      const auto d = primary_decomposition(n);
      if (d.order() != euler_phi(n)) FAIL("order mismatch at n = " << n);
    }
    for (u64 n = 3; n <= 3000; ++n) CHECK(primary_decomposition(n).order() == oracle::phi(n));
  }
  SUBCASE("coprime factors combine by multiset union") {
    for (u64 n = 1; n <= 100; ++n) {
      for (u64 m = n; n * m <= 10000; ++m) {
        if (std::gcd(n, m) != 1 || n * m < 3) continue;
        std::vector<u64> expected;
        for (u64 part : {n, m}) {
          if (part <= 2) continue;
          const auto v = values(primary_decomposition(part));
          expected.insert(expected.end(), v.begin(), v.end());
        }
        std::sort(expected.begin(), expected.end());
        if (values(primary_decomposition(n * m)) != expected) FAIL("union fails for " << n << " * " << m);
      }
    }
  }
  SUBCASE("S is the least component") {
    auto gen = oracle::rng(2);
    for (int trial = 0; trial < 3000; ++trial) {
      const u64 n = gen() % 1'000'000'000 + 3;
      const auto d = primary_decomposition(n);
      const auto s = least_primary_factor(n);
      CHECK(std::find(d.components.begin(), d.components.end(), s) != d.components.end());
      CHECK(s == d.components.front());
      CHECK(s.value() == oracle::least_primary_rule(n));
    }
  }
}

TEST_CASE("next prime power and m exponent") {
  CHECK(next_prime_power(PrimePower::parse(3)).value() == 4);
  CHECK(next_prime_power(PrimePower::parse(5)).value() == 7);
  CHECK(next_prime_power(PrimePower::parse(8)).value() == 9);
  CHECK(next_prime_power(PrimePower::parse(2)).value() == 3);
  CHECK(next_prime_power(PrimePower::parse(127)).value() == 128);
  CHECK(m_exponent(2, PrimePower::parse(5)) == 2);
  CHECK(m_exponent(3, PrimePower::parse(4)) == 1);
  CHECK(m_exponent(2, PrimePower::parse(3)) == 1);
  CHECK(m_exponent(2, PrimePower::parse(8)) == 2);
  CHECK(kind_of([] { m_exponent(5, PrimePower::parse(5)); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { m_exponent(4, PrimePower::parse(5)); }) == ErrorKind::invalid_input);

  u64 previous = 2;
  for (u64 v = 3; v < 5000; ++v) {
    const auto q = PrimePower::from_value(v);
    if (!q) continue;
    CHECK(next_prime_power(*PrimePower::from_value(previous)).value() == v);
    previous = v;
    for (u64 ell = 2; ell < std::min<u64>(v, 60); ++ell) {
      if (!oracle::is_prime(ell)) continue;
      const unsigned m = m_exponent(ell, *q);
      u64 lm = 1;
      for (unsigned i = 0; i < m; ++i) lm *= ell;
      CHECK(lm < v);
      CHECK(v <= lm * ell);
    }
  }
  // Exact powers are where floating-point ceil(log) goes wrong.
  const auto big = PrimePower(3, 39);
  CHECK(m_exponent(3, big) == 38);
  CHECK(m_exponent(2, PrimePower(2, 63)) == 62);
}
