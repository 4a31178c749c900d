#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace cqmq::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericError = 3 };

struct CommandContext {
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  /// Worker threads for the job pool; 0 picks the hardware concurrency.
  unsigned threads = 0;
  std::ostream* log = nullptr;
};

int cmd_curvature(const RunConfig& config, const CommandContext& ctx);
int cmd_verify(const RunConfig& config, const CommandContext& ctx);
int cmd_spectrum(const RunConfig& config, const CommandContext& ctx);

/// Loads the config, resolves the output directory (--out, then the config's
/// "output", then ./cqmq-out), runs the command and maps errors to exit codes.
int run_command(const std::string& command, CommandContext ctx);

}  // namespace cqmq::cli
