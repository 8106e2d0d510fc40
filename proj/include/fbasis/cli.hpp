#pragma once

#include "fbasis/errors.hpp"
#include "fbasis/lp_operators.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fbasis {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string command;
  std::string seq;
  std::string filter = "frechet";
  std::string other;
  std::string set;
  std::string p = "1";
  std::string space = "l1";
  std::size_t n_max = 32;
  std::uint64_t horizon = 1'000'000;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string output;
  std::string dual = "linf";
  std::string eps = "1/10";
  std::vector<std::string> vectors;
  std::string grid = "10,100,1000,10000";
};

struct RunResult {
  int exit_code = 0;
  std::string report;
  /// Diagnostic for stderr; empty on success.
  std::string message;
};

/// Subcommands accepted by run_command.
const std::vector<std::string>& commands();

/// "l1", "l2", "lp" (exponent from `p`) or "lp(NUM)".
SpaceKind parse_space(const std::string& space, const std::string& p);

/// Reads `key = value` lines; '#' starts a comment line. Keys are flag names
/// without dashes. Throws UsageError for unknown keys, IoError when unreadable.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path);

/// Flags override config-file values, which override FBASIS_HORIZON, which
/// overrides the defaults. Throws UsageError.
RunConfig parse_args(int argc, const char* const* argv);

/// Dispatches one command. Exit codes: 0 success, 1 refuted or falsified,
/// 2 inconclusive, 64 usage, 65 parse or domain error, 74 output failure.
RunResult run_command(const RunConfig& config);

int cli_main(int argc, const char* const* argv);

}  // namespace fbasis
