#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "lpf/characters.hpp"
#include "lpf/constants.hpp"
#include "lpf/counting.hpp"
#include "lpf/error.hpp"
#include "lpf/mgroup.hpp"
#include "lpf/parallel.hpp"
#include "lpf/residue.hpp"

namespace lpf::cli {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void usage(const std::string& what) { fail(ErrorKind::invalid_input, what); }

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", v);
  return buffer;
}

/// A command result: the JSON payload plus a flat table for csv/text.
struct Output {
  Json parameters = Json::object();
  Json results;
  std::vector<std::string> columns;
  std::vector<Json> rows;
};

std::string cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + cell(v[i]);
    return s;
  }
  return v.dump();
}

std::string csv_cell(const Json& v) {
  std::string s = v.is_number_float() ? v.dump() : cell(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
  return quoted + "\"";
}

void write_csv(const Output& o, std::ostream& out) {
  for (std::size_t i = 0; i < o.columns.size(); ++i) out << (i ? "," : "") << o.columns[i];
  out << '\n';
  for (const auto& row : o.rows) {
    for (std::size_t i = 0; i < o.columns.size(); ++i) out << (i ? "," : "") << csv_cell(row[o.columns[i]]);
    out << '\n';
  }
}

void write_text(const Output& o, std::ostream& out) {
  if (o.rows.size() == 1) {
    std::size_t width = 0;
    for (const auto& c : o.columns) width = std::max(width, c.size());
    for (const auto& c : o.columns) {
      out << c << std::string(width - c.size(), ' ') << " : " << cell(o.rows[0][c]) << '\n';
    }
    return;
  }
  std::vector<std::size_t> width(o.columns.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < o.columns.size(); ++i) width[i] = o.columns[i].size();
  for (const auto& row : o.rows) {
    std::vector<std::string> line;
    for (std::size_t i = 0; i < o.columns.size(); ++i) {
      line.push_back(cell(row[o.columns[i]]));
      width[i] = std::max(width[i], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      out << (i ? "  " : "") << std::string(width[i] - line[i].size(), ' ') << line[i];
    }
    out << '\n';
  };
  emit(o.columns);
  for (const auto& line : cells) emit(line);
}

void write(const std::string& command, const std::string& format, const Output& o, std::ostream& out) {
  if (format == "csv") return write_csv(o, out);
  if (format == "text") return write_text(o, out);
  Json envelope;
  envelope["command"] = command;
  envelope["parameters"] = o.parameters;
  envelope["results"] = o.results;
  envelope["tool_version"] = kToolVersion;
  envelope["conventions"] = {{"n=1,2 in A_q", true}};
  out << envelope.dump(2) << '\n';
}

PrimePower parse_q(const std::string& text) {
  const u64 value = parse_integer(text);
  const auto q = PrimePower::from_value(value);
  if (!q) usage("q must be a prime power, got " + std::to_string(value));
  return *q;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json complex_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

// ---- factor ----

Output cmd_factor(const std::string& n_text) {
  const u64 n = parse_integer(n_text);
  if (n == 0) usage("n must be >= 1");
  Output o;
  o.parameters["n"] = n;
  const auto f = factorize(n);
  Json factors = Json::array();
  for (const auto& pf : f.factors) factors.push_back({{"prime", pf.prime}, {"exponent", pf.multiplicity}});
  Json row;
  row["n"] = n;
  row["factorization"] = f.to_string();
  if (n <= 2) {
    row["decomposition"] = "{}";
    row["S"] = "undefined";
    o.results = {{"n", n}, {"factors", factors}, {"decomposition", Json::array()}, {"S", nullptr}};
  } else {
    const auto d = primary_decomposition(n);
    Json comps = Json::array();
    for (const auto& c : d.components) comps.push_back(c.value());
    const u64 s = least_primary_factor(n).value();
    row["decomposition"] = d.to_string();
    row["S"] = s;
    o.results = {{"n", n}, {"factors", factors}, {"decomposition", comps}, {"S", s}};
  }
  o.columns = {"n", "factorization", "decomposition", "S"};
  o.rows.push_back(row);
  return o;
}

// ---- count ----

struct CountSource {
  CountMode mode;
  std::optional<SieveTable> table;

  u64 a_prime(const PrimePower& q, double x) const {
    if (table) return count_A_prime(*table, q, x);
    return count_A_prime(q, x, mode);
  }
  u64 a(const PrimePower& q, double x) const { return a_prime(q, x) + a_prime(q, x / 2); }
  u64 e(const PrimePower& q, double x) const {
    if (q.value() == 2) {
      const u64 n = floor_count(x);
      return n < 3 ? 0 : (n - 2) - (a(*PrimePower::from_value(3), x) - 2);
    }
    return a(q, x) - a(next_prime_power(q), x);
  }
};

CountSource make_source(CountMode mode, u64 bound, const std::string& cache_dir) {
  CountSource source{mode, std::nullopt};
  if (mode != CountMode::sieve) return source;
  SieveOptions options;
  options.threads = default_thread_count();
  const u64 n = std::max<u64>(bound, 3);
  if (cache_dir.empty()) {
    source.table = sieve_least_primary(n, options);
    return source;
  }
  const auto path = std::filesystem::path(cache_dir) / sp_cache_name(n);
  if (std::filesystem::exists(path)) {
    const auto cached = load_sp_cache(path, n);
    options.sp_cache = &cached;
    source.table = sieve_least_primary(n, options);
  } else {
    source.table = sieve_least_primary(n, options);
    std::filesystem::create_directories(cache_dir);
    save_sp_cache(source.table->sp_table(), path);
  }
  return source;
}

CountMode parse_mode(const std::string& mode) {
  if (mode == "sieve") return CountMode::sieve;
  if (mode == "predicate") return CountMode::predicate;
  return CountMode::oracle;
}

/// Constants for q when the pipeline covers it.
std::optional<ConstantReport> constants_for(const PrimePower& q, u64 prime_bound) {
  if (!constants_supported(q)) return std::nullopt;
  return leading_constant(q, prime_bound, default_thread_count());
}

Json count_row(const CountSource& source, const PrimePower& q, double x, u64 prime_bound,
               std::map<u64, std::optional<ConstantReport>>& reports) {
  auto report_for = [&](const PrimePower& p) -> const std::optional<ConstantReport>& {
    auto it = reports.find(p.value());
    if (it == reports.end()) it = reports.emplace(p.value(), constants_for(p, prime_bound)).first;
    return it->second;
  };
  Json row;
  row["q"] = q.value();
  row["x"] = x;
  std::optional<double> main_a_prime;
  std::optional<double> main_e;
  bool warning = outside_main_range(q.value(), std::max(x, 1.0));
  if (q.value() == 2) {
    const u64 n = floor_count(x);
    row["count_A"] = n;
    row["count_A_prime"] = (n + 1) / 2;
    row["count_E"] = source.e(q, x);
    if (x >= 3) {
      const auto& r3 = report_for(*PrimePower::from_value(3));
      if (r3) main_e = asymptotic_E_two(*r3, x).value;
    }
  } else {
    row["count_A"] = source.a(q, x);
    row["count_A_prime"] = source.a_prime(q, x);
    row["count_E"] = source.e(q, x);
    if (x >= 3) {
      const auto& r = report_for(q);
      if (r) {
        main_a_prime = asymptotic_A_prime(*r, x);
        main_e = asymptotic_E(*r, x).value;
      }
    }
  }
  row["main_term_A_prime"] = optional_number(main_a_prime);
  row["main_term_E"] = optional_number(main_e);
  row["ratio_E"] = main_e ? Json(static_cast<double>(row["count_E"].get<u64>()) / *main_e) : Json(nullptr);
  row["warning"] = warning;
  return row;
}

Output cmd_count(const std::string& q_text, const std::string& x_text, const std::string& mode_text,
                 u64 prime_bound, const std::string& cache_dir) {
  const auto q = parse_q(q_text);
  const double x = parse_real(x_text);
  const auto mode = parse_mode(mode_text);
  if (mode != CountMode::sieve) {
    // The q = 2 complement and the q^+ term both run through the predicate.
    const auto needed = q.value() == 2 ? *PrimePower::from_value(3) : q;
    if (!residue_supported(needed) || !residue_supported(next_prime_power(needed))) {
      fail(ErrorKind::unsupported_q, "mode " + mode_text + " needs a residue system for q and q+");
    }
  }
  Output o;
  o.parameters = {{"q", q.value()}, {"x", x}, {"mode", mode_text}, {"prime_bound", prime_bound}};
  const auto source = make_source(mode, floor_count(x), cache_dir);
  std::map<u64, std::optional<ConstantReport>> reports;
  const Json row = count_row(source, q, x, prime_bound, reports);
  o.results = row;
  for (const auto& [key, _] : row.items()) o.columns.push_back(key);
  o.rows.push_back(row);
  return o;
}

// ---- constant ----

Output cmd_constant(const std::string& q_text, u64 prime_bound) {
  const auto q = parse_q(q_text);
  if (!constants_supported(q)) {
    fail(ErrorKind::unsupported_q, "no constants pipeline for q = " + std::to_string(q.value()));
  }
  const auto r = leading_constant(q, prime_bound, default_thread_count());
  Output o;
  o.parameters = {{"q", q.value()}, {"prime_bound", prime_bound}};
  Json row;
  row["q"] = q.value();
  row["P"] = prime_bound;
  row["C_mid"] = r.c_value.midpoint;
  row["C_lo"] = r.c_value.lower();
  row["C_hi"] = r.c_value.upper();
  row["gamma_prefactor"] = r.gamma_prefactor;
  row["L_product"] = r.l_product;
  row["A_product_root"] = r.a_product_root.midpoint;
  row["G"] = r.g_value.midpoint;
  row["beta_num"] = r.beta.num();
  row["beta_den"] = r.beta.den();
  row["tail_bound"] = r.tail_bound;
  o.results = row;
  for (const auto& [key, _] : row.items()) o.columns.push_back(key);
  o.rows.push_back(row);
  return o;
}

// ---- compare ----

std::vector<double> parse_x_list(const std::string& text) {
  std::vector<double> xs;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) xs.push_back(parse_real(item));
  }
  if (xs.empty()) usage("--x-list must name at least one x");
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

Output cmd_compare(const std::string& qmax_text, const std::string& x_text, u64 prime_bound,
                   const std::string& cache_dir) {
  const u64 qmax = parse_integer(qmax_text);
  if (qmax < 2) usage("--qmax must be >= 2");
  const auto xs = parse_x_list(x_text);
  Output o;
  o.parameters = {{"qmax", qmax}, {"x_list", xs}, {"prime_bound", prime_bound}};
  const auto source = make_source(CountMode::sieve, floor_count(xs.back()), cache_dir);
  std::map<u64, std::optional<ConstantReport>> reports;
  o.results = Json::array();
  for (u64 v = 2; v <= qmax; ++v) {
    const auto q = PrimePower::from_value(v);
    if (!q) continue;
    for (double x : xs) {
      const Json full = count_row(source, *q, x, prime_bound, reports);
      Json row;
      for (const char* key : {"q", "x", "count_E", "main_term_E", "ratio_E", "warning"}) row[key] = full[key];
      o.results.push_back(row);
      o.rows.push_back(row);
    }
  }
  o.columns = {"q", "x", "count_E", "main_term_E", "ratio_E", "warning"};
  return o;
}

// ---- chars ----

Output cmd_chars(const std::string& modulus_text) {
  const u64 modulus = parse_integer(modulus_text);
  if (modulus < 3) usage("--modulus must be >= 3");
  const auto group = character_group(modulus);
  const auto l_values = L1_all(group, default_thread_count());
  Output o;
  o.parameters = {{"modulus", modulus}};
  o.results = Json::array();
  for (std::size_t i = 0; i < group.size(); ++i) {
    const auto chi = group.character(i);
    const auto prim = conductor_and_primitive(chi);
    Json row;
    row["index"] = i;
    row["exponents"] = chi.exponents();
    row["order"] = chi.order();
    row["conductor"] = prim.conductor;
    row["parity"] = chi.is_even() ? "even" : "odd";
    row["tau"] = prim.conductor == 1 ? Json(nullptr) : complex_json(gauss_sum(prim.character));
    row["L1"] = chi.is_principal() ? Json(nullptr) : complex_json(l_values[i]);
    o.results.push_back(row);
    o.rows.push_back(row);
  }
  o.columns = {"index", "exponents", "order", "conductor", "parity", "tau", "L1"};
  return o;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::capacity: return kCapacity;
    case ErrorKind::unsupported_q: return kUnsupportedQ;
    default: return kUsage;
  }
}

}  // namespace

std::uint64_t parse_integer(const std::string& text) {
  // digits [. digits] [e|E [+] digits]
  std::size_t i = 0;
  std::string digits;
  int scale = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) digits += text[i++];
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      digits += text[i++];
      --scale;
    }
  }
  if (digits.empty()) usage("not a nonnegative integer: '" + text + "'");
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    if (i < text.size() && text[i] == '+') ++i;
    std::string exponent;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) exponent += text[i++];
    if (exponent.empty() || exponent.size() > 3) usage("bad exponent in '" + text + "'");
    scale += std::stoi(exponent);
  }
  if (i != text.size()) usage("not a nonnegative integer: '" + text + "'");
  // Drop trailing zeros absorbed by a negative scale.
  while (scale < 0 && digits.size() > 1 && digits.back() == '0') {
    digits.pop_back();
    ++scale;
  }
  if (scale < 0) {
    if (digits.find_first_not_of('0') == std::string::npos) return 0;
    usage("not an integer: '" + text + "'");
  }
  unsigned __int128 value = 0;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (char c : digits) {
    value = value * 10 + static_cast<unsigned>(c - '0');
    if (value > kMax) fail(ErrorKind::capacity, "integer out of range: '" + text + "'");
  }
  for (int k = 0; k < scale; ++k) {
    value *= 10;
    if (value > kMax) {
      if (digits.find_first_not_of('0') == std::string::npos) return 0;
      fail(ErrorKind::capacity, "integer out of range: '" + text + "'");
    }
  }
  return static_cast<std::uint64_t>(value);
}

double parse_real(const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    usage("not a number: '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v) || v < 0) usage("expected a nonnegative number, got '" + text + "'");
  return v;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Least primary factor of the multiplicative group mod n", "lpf"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.set_version_flag("--version", kToolVersion);

  std::string n_text;
  auto* factor = app.add_subcommand("factor", "Factorization, primary decomposition and S(n)");
  factor->add_option("n", n_text, "Positive integer")->required();

  std::string q_text;
  std::string x_text;
  std::string mode = "sieve";
  std::string bound_text = std::to_string(kDefaultPrimeBound);
  std::string cache_dir;
  auto* count = app.add_subcommand("count", "Counts of A_q(x), A'_q(x), E_q(x) with main terms");
  count->add_option("--q", q_text, "Prime power q")->required();
  count->add_option("--x", x_text, "Upper limit x")->required();
  count->add_option("--mode", mode, "Counting route")->check(CLI::IsMember({"sieve", "predicate", "oracle"}));
  count->add_option("--prime-bound", bound_text, "Prime bound P for the constants in the main terms");
  count->add_option("--sp-cache", cache_dir, "Directory holding the per-prime s(p) cache");

  auto* constant = app.add_subcommand("constant", "Leading constant C_q with its sub-factors");
  constant->add_option("--q", q_text, "Prime power q >= 3")->required();
  constant->add_option("--prime-bound", bound_text, "Prime bound P for the Euler product");

  std::string qmax_text;
  std::string x_list;
  auto* compare = app.add_subcommand("compare", "Empirical E_q(x) against C_q x / (log x)^(1 - beta_q)");
  compare->add_option("--qmax", qmax_text, "Largest q")->required();
  compare->add_option("--x-list", x_list, "Comma-separated x values")->required();
  compare->add_option("--prime-bound", bound_text, "Prime bound P for the constants");
  compare->add_option("--sp-cache", cache_dir, "Directory holding the per-prime s(p) cache");

  std::string modulus_text;
  auto* chars = app.add_subcommand("chars", "Dirichlet characters mod Q with conductors and L(1, chi)");
  chars->add_option("--modulus", modulus_text, "Modulus Q >= 3")->required();

  for (auto* sub : {factor, count, constant, compare, chars}) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Output o;
    std::string name;
    if (*factor) {
      name = "factor";
      o = cmd_factor(n_text);
    } else if (*count) {
      name = "count";
      o = cmd_count(q_text, x_text, mode, parse_integer(bound_text), cache_dir);
    } else if (*constant) {
      name = "constant";
      o = cmd_constant(q_text, parse_integer(bound_text));
    } else if (*compare) {
      name = "compare";
      o = cmd_compare(qmax_text, x_list, parse_integer(bound_text), cache_dir);
    } else {
      name = "chars";
      o = cmd_chars(modulus_text);
    }
    write(name, format, o, out);
    return kOk;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    err << "error (capacity): out of memory\n";
    return kCapacity;
  }
}

}  // namespace lpf::cli
