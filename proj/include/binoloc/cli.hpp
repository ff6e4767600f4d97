#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "binoloc/config.hpp"

namespace binoloc {

/// Bad command line: unknown flag or subcommand, missing value.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Run, Follow, Match, Search };

struct RunConfig {
  Command command = Command::Run;
  ExperimentConfig experiment{};
  std::filesystem::path out_dir = "results";
  unsigned workers = 1;
  bool verbose = false;
  bool trace = false;
};

/// Merges defaults <- config file <- BINOLOC_SEED <- flags. args excludes the
/// program name. Throws UsageError or ConfigError.
RunConfig parse_args(const std::vector<std::string>& args, const std::optional<std::string>& env_seed = std::nullopt);

std::string usage_text();

/// Exit codes: 0 success, 1 campaign failure threshold exceeded, 2 usage or
/// configuration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::optional<std::string>& env_seed);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace binoloc
