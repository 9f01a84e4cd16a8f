#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cavgrover/basis.hpp"

namespace cavgrover::cli {

enum class Command { Design, Simulate, Sweep, Compare, Figure3 };
enum class OutputFormat { Text, Structured };

/// Exit-code contract of the command-line tool.
enum ExitCode : int { kSuccess = 0, kAssertionFailed = 1, kUsage = 2, kIoError = 3 };

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputEnv = "CAVGROVER_OUT";

struct RunConfig {
  Command command = Command::Figure3;
  std::vector<int> n_atoms{8};  // several values only for sweep
  double epsilon = 0.05;
  double coupling_g = 0.0;  // 0: 100 * Omega_peak / N
  double delta = 0.0;       // 0: delta * duration = 1e3
  bool rwa = true;
  long steps = 0;           // 0: automatic
  std::size_t samples = 4000;
  double cutoff = 4.0;
  double width = 1.0;
  std::string out_dir = "cavgrover-out";
  OutputFormat format = OutputFormat::Text;
  // simulate only
  Level level = Level::Effective3;
  std::string initial = "uniform";      // uniform | marked
  std::string omega_prime = "designed";  // designed | off

  /// `key = value` lines describing the effective configuration, in a fixed order.
  std::vector<std::string> echo() const;
};

struct ParseOutcome {
  std::optional<RunConfig> config;
  int exit_code = kSuccess;
  std::string message;  // help text or field-precise error
};

/// Parses flags and an optional `--config FILE` (INI/TOML syntax; flags win).
ParseOutcome parse_config(const std::vector<std::string>& args);

/// Runs one command and writes its outputs under config.out_dir.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

std::string_view command_name(Command command);

}  // namespace cavgrover::cli
