#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lpf::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kUsage = 2, kCapacity = 3, kUnsupportedQ = 4 };

/// Runs one command line (without the program name). Output goes to out,
/// diagnostics to err; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Exact integer from decimal or scientific notation ("1e7", "2.5e3").
/// Throws lpf::Error(invalid_input) for anything non-integral or negative.
std::uint64_t parse_integer(const std::string& text);
/// Nonnegative finite real.
double parse_real(const std::string& text);

}  // namespace lpf::cli
