#include "lpf/counting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>

#include "lpf/arith.hpp"
#include "lpf/error.hpp"
#include "lpf/parallel.hpp"

namespace lpf {

namespace {

constexpr u64 kUnset = std::numeric_limits<u64>::max();
constexpr std::uint32_t kUnset32 = std::numeric_limits<std::uint32_t>::max();
constexpr char kCacheMagic[8] = {'L', 'P', 'F', 'S', 'P', 'V', '0', '1'};
// Working arrays are 32-bit.
constexpr u64 kHardLimit = std::numeric_limits<std::uint32_t>::max() - 1;

struct SieveContext {
  u64 bound;
  u64 root;
  const std::vector<u64>* base_primes;
  const std::vector<std::uint32_t>* base_s;  // S(p) for base primes, 0 for p = 2
  const SpTable* cache;
  u64* values;
  std::uint64_t* large_prime_bits;
};

// Phase A on [lo, hi), lo a multiple of 64.
void sieve_segment(const SieveContext& ctx, u64 lo, u64 hi) {
  // The window starts one early so t(p - 1) is at hand for primes p = lo.
  const u64 start = lo == 0 ? 0 : lo - 1;
  const std::size_t width = hi - start;
  std::vector<std::uint32_t> rem(width);
  std::vector<std::uint32_t> unitary(width, kUnset32);  // min l^{v_l(n)} over l | n
  std::vector<std::uint32_t> partial(width, kUnset32);  // S over the base primes
  for (std::size_t i = 0; i < width; ++i) rem[i] = static_cast<std::uint32_t>(start + i);

  const auto& primes = *ctx.base_primes;
  for (std::size_t j = 0; j < primes.size(); ++j) {
    const u64 p = primes[j];
    const std::uint32_t s_p = (*ctx.base_s)[j];
    u64 m = std::max<u64>((start + p - 1) / p * p, p);
    for (; m < hi; m += p) {
      const std::size_t i = m - start;
      std::uint32_t r = rem[i];
      u64 power = 1;
      unsigned v = 0;
      do {
        r /= static_cast<std::uint32_t>(p);
        power *= p;
        ++v;
      } while (r % p == 0);
      rem[i] = r;
      unitary[i] = std::min<std::uint32_t>(unitary[i], static_cast<std::uint32_t>(power));
      if (p != 2) {
        partial[i] = std::min(partial[i], s_p);
      } else if (v >= 2) {
        partial[i] = std::min<std::uint32_t>(partial[i], 2);
      }
    }
  }
  // Whatever is left is 1 or a single prime above the root.
  for (std::size_t i = 0; i < width; ++i) {
    if (rem[i] > 1) unitary[i] = std::min(unitary[i], rem[i]);
  }
  for (u64 n = std::max<u64>(lo, 3); n < hi; ++n) {
    const std::size_t i = n - start;
    if (rem[i] == n && n > ctx.root) {
      u64 s = unitary[i - 1];
      if (ctx.cache != nullptr) {
        const auto cached = ctx.cache->lookup(n);
        if (!cached) fail(ErrorKind::invalid_input, "sp cache has no entry for prime " + std::to_string(n));
        s = *cached;
      }
      ctx.values[n] = s;
      ctx.large_prime_bits[n / 64] |= std::uint64_t{1} << (n % 64);
    } else {
      ctx.values[n] = partial[i] == kUnset32 ? kUnset : partial[i];
    }
  }
}

// Phase B for the large primes in [lo, hi): each n has at most one prime
// factor above the root, so the writes of different primes never collide.
void spread_large_primes(const SieveContext& ctx, u64 lo, u64 hi) {
  for (u64 p = lo; p < hi; ++p) {
    if ((ctx.large_prime_bits[p / 64] >> (p % 64) & 1) == 0) continue;
    const u64 s = ctx.values[p];
    for (u64 m = 2 * p; m <= ctx.bound; m += p) {
      ctx.values[m] = std::min(ctx.values[m], s);
    }
  }
}

void require_threshold(const PrimePower& q) {
  if (q.value() < 3) fail(ErrorKind::invalid_input, "q must be >= 3 here; use count_E for q = 2");
}

u64 table_limit(const SieveTable& table, double x) {
  const u64 n = floor_count(x);
  if (n > table.bound()) {
    fail(ErrorKind::capacity, "x = " + std::to_string(n) + " exceeds the sieve bound " + std::to_string(table.bound()));
  }
  return n;
}

}  // namespace

std::optional<u64> SpTable::lookup(u64 p) const {
  const auto it = std::lower_bound(entries.begin(), entries.end(), p,
                                   [](const std::pair<u64, u64>& e, u64 key) { return e.first < key; });
  if (it == entries.end() || it->first != p) return std::nullopt;
  return it->second;
}

u64 SieveTable::at(u64 n) const {
  if (n <= 2) fail(ErrorKind::undefined_s, "S(" + std::to_string(n) + ") is undefined");
  if (n > bound_) fail(ErrorKind::invalid_input, "n exceeds the sieve bound");
  return values_[n];
}

SpTable SieveTable::sp_table() const {
  SpTable table;
  table.bound = bound_;
  for (u64 p : arith::primes_up_to(bound_)) {
    if (p != 2) table.entries.emplace_back(p, values_[p]);
  }
  return table;
}

SieveTable sieve_least_primary(u64 x, const SieveOptions& options) {
  if (x < 3) fail(ErrorKind::invalid_input, "sieve_least_primary: x must be >= 3");
  if (x > std::min(options.capacity, kHardLimit)) {
    fail(ErrorKind::capacity, "sieve bound " + std::to_string(x) + " exceeds the configured capacity");
  }
  if (options.segment_size == 0 || options.segment_size % 64 != 0) {
    fail(ErrorKind::invalid_input, "segment size must be a positive multiple of 64");
  }
  SieveTable table;
  table.bound_ = x;
  std::vector<std::uint64_t> bits;
  try {
    table.values_.assign(x + 1, kUnset);
    bits.assign(x / 64 + 1, 0);
  } catch (const std::bad_alloc&) {
    fail(ErrorKind::capacity, "not enough memory for a sieve of size " + std::to_string(x));
  }
  table.values_[0] = table.values_[1] = table.values_[2] = 0;

  const u64 root = arith::isqrt_floor(x);
  const auto base_primes = arith::primes_up_to(root);
  std::vector<std::uint32_t> base_s;
  for (u64 p : base_primes) {
    base_s.push_back(p == 2 ? 0 : static_cast<std::uint32_t>(least_primary_of_odd_prime(p)));
  }
  SieveContext ctx{x, root, &base_primes, &base_s, nullptr, table.values_.data(), bits.data()};
  if (options.sp_cache != nullptr) {
    if (options.sp_cache->bound < x) fail(ErrorKind::invalid_input, "sp cache bound is below the sieve bound");
    ctx.cache = options.sp_cache;
  }

  const u64 segment = options.segment_size;
  const std::size_t segments = static_cast<std::size_t>((x + 1 + segment - 1) / segment);
  parallel_for(segments, options.threads, [&](std::size_t k) {
    const u64 lo = k * segment;
    sieve_segment(ctx, lo, std::min<u64>(lo + segment, x + 1));
  });

  const u64 first = root + 1;
  const u64 last = x / 2 + 1;
  if (first < last) {
    const std::size_t chunks = static_cast<std::size_t>((last - first + segment - 1) / segment);
    parallel_for(chunks, options.threads, [&](std::size_t k) {
      const u64 lo = first + k * segment;
      spread_large_primes(ctx, lo, std::min<u64>(lo + segment, last));
    });
  }
  for (u64 n = 3; n <= x; ++n) {
    if (table.values_[n] == kUnset) throw std::logic_error("sieve left S(" + std::to_string(n) + ") unset");
  }
  return table;
}

std::string sp_cache_name(u64 bound) { return "lpf_sp_" + std::to_string(bound) + ".bin"; }

void save_sp_cache(const SpTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::invalid_input, "cannot open " + path.string() + " for writing");
  out.write(kCacheMagic, sizeof kCacheMagic);
  for (const auto& [p, s] : table.entries) {
    std::array<unsigned char, 16> bytes{};
    for (int b = 0; b < 8; ++b) {
      bytes[b] = static_cast<unsigned char>(p >> (8 * b));
      bytes[8 + b] = static_cast<unsigned char>(s >> (8 * b));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  }
  if (!out) fail(ErrorKind::invalid_input, "write to " + path.string() + " failed");
}

SpTable load_sp_cache(const std::filesystem::path& path, u64 bound) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::invalid_input, "cannot open " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kCacheMagic, sizeof magic) != 0) {
    fail(ErrorKind::invalid_input, path.string() + " is not an sp cache");
  }
  SpTable table;
  table.bound = bound;
  std::array<unsigned char, 16> bytes{};
  while (in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    u64 p = 0;
    u64 s = 0;
    for (int b = 7; b >= 0; --b) {
      p = p << 8 | bytes[b];
      s = s << 8 | bytes[8 + b];
    }
    if (p > bound || (!table.entries.empty() && table.entries.back().first >= p)) {
      fail(ErrorKind::invalid_input, path.string() + " has entries out of order or past the bound");
    }
    table.entries.emplace_back(p, s);
  }
  if (in.gcount() != 0) fail(ErrorKind::invalid_input, path.string() + " ends in a partial record");
  return table;
}

u64 floor_count(double x) {
  if (std::isnan(x) || x < 0) fail(ErrorKind::invalid_input, "x must be a nonnegative number");
  if (x >= 9.2e18) fail(ErrorKind::capacity, "x is too large");
  return static_cast<u64>(std::floor(x));
}

u64 count_A_prime(const SieveTable& table, const PrimePower& q, double x) {
  require_threshold(q);
  const u64 n_max = table_limit(table, x);
  if (n_max == 0) return 0;
  const auto values = table.values();
  u64 count = 1;
  for (u64 n = 3; n <= n_max; n += 2) count += values[n] >= q.value();
  return count;
}

u64 count_A(const SieveTable& table, const PrimePower& q, double x) {
  return count_A_prime(table, q, x) + count_A_prime(table, q, x / 2);
}

u64 count_E(const SieveTable& table, const PrimePower& q, double x) {
  if (q.value() == 2) {
    const u64 n_max = table_limit(table, x);
    if (n_max < 3) return 0;
    // Every n >= 3 has S(n) >= 2; those with S(n) >= 3 are A_3 minus {1, 2}.
    return (n_max - 2) - (count_A(table, *PrimePower::from_value(3), x) - 2);
  }
  return count_A(table, q, x) - count_A(table, next_prime_power(q), x);
}

std::vector<u64> enumerate_N_B(const ResidueClassSet& classes, double x) {
  const u64 n_max = floor_count(x);
  if (n_max == 0) return {};
  std::vector<u64> primes;
  for (u64 p : arith::primes_up_to(n_max)) {
    if (classes.contains(p)) primes.push_back(p);
  }
  std::vector<u64> out;
  // Depth-first over p_1 < p_2 < ... with exponents, so each n appears once.
  auto extend = [&](auto&& self, std::size_t from, u64 current) -> void {
    out.push_back(current);
    for (std::size_t i = from; i < primes.size(); ++i) {
      const u64 p = primes[i];
      if (current > n_max / p) break;
      for (u64 m = current * p;; m *= p) {
        self(self, i + 1, m);
        if (m > n_max / p) break;
      }
    }
  };
  extend(extend, 0, 1);
  std::sort(out.begin(), out.end());
  return out;
}

u64 count_A_prime(const PrimePower& q, double x, CountMode mode, const SieveOptions& options) {
  require_threshold(q);
  const u64 n_max = floor_count(x);
  if (mode == CountMode::sieve) {
    if (n_max == 0) return 0;
    if (n_max < 3) return 1;
    return count_A_prime(sieve_least_primary(n_max, options), q, x);
  }
  if (!residue_supported(q)) {
    fail(ErrorKind::unsupported_q, "q = " + std::to_string(q.value()) + " has no supported residue system");
  }
  const auto classes = residue_set_B(q);
  if (mode == CountMode::oracle) return enumerate_N_B(classes, x).size();
  if (n_max == 0) return 0;
  u64 count = 1;
  for (u64 n = 3; n <= n_max; n += 2) {
    const auto f = factorize(n);
    count += std::all_of(f.factors.begin(), f.factors.end(),
                         [&](const PrimeFactor& pf) { return classes.contains(pf.prime); });
  }
  return count;
}

bool outside_main_range(u64 q, double x) { return static_cast<double>(q) > std::cbrt(std::log(x)); }

double asymptotic_A_prime(const ConstantReport& report, double x) {
  if (!(x > 1)) fail(ErrorKind::invalid_input, "asymptotic_A_prime: x must be > 1");
  const double b = report.beta.to_double();
  return report.g_value.midpoint / report.gamma_of_beta * x / std::pow(std::log(x), 1.0 - b);
}

AsymptoticValue asymptotic_E(const ConstantReport& report, double x) {
  if (!(x > 1)) fail(ErrorKind::invalid_input, "asymptotic_E: x must be > 1");
  const double b = report.beta.to_double();
  return {report.c_value.midpoint * x / std::pow(std::log(x), 1.0 - b), outside_main_range(report.q, x)};
}

AsymptoticValue asymptotic_E_two(const ConstantReport& report_q3, double x) {
  if (report_q3.q != 3) fail(ErrorKind::invalid_input, "asymptotic_E_two needs the q = 3 constants");
  const auto e3 = asymptotic_E(report_q3, x);
  return {x - e3.value, outside_main_range(2, x)};
}

}  // namespace lpf
