#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace growthrates::cli {

// Exit codes: 0 success/pass, 1 bound or certificate violation,
// 2 usage/parse errors (including malformed inputs).
inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

// Subcommands: gen-lp, solve, certify, rate-check, bench. The environment
// variable GROWTHRATES_SEED overrides any config-file seed.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

// Flat key=value configuration with dotted section prefixes; '#' starts a
// comment. Parse errors carry line numbers.
std::map<std::string, std::string> parse_config(std::istream& in, const std::string& source_name);

}  // namespace growthrates::cli
