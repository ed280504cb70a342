#pragma once

#include <iosfwd>
#include <string>

#include "kamlie/config.hpp"

namespace kamlie {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitMissing = 3;

/// Runs the subcommand on a parsed config; artifacts go to the run directory.
int cmd_reduce(const RunConfig& c, std::ostream& out);
int cmd_sieve(const RunConfig& c, std::ostream& out);
int cmd_stability(const RunConfig& c, std::ostream& out);
int cmd_verify(const RunConfig& c, std::ostream& out);
int cmd_bench(const RunConfig& c, std::ostream& out);

/// Loads and validates the config, dispatches, and maps errors to exit codes.
int run_command(const std::string& name, const std::string& config_path, std::ostream& out, std::ostream& err);

}  // namespace kamlie
