#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "rnnlinz/io.hpp"

namespace rnnlinz::cli {

enum class Command { Simulate, Linearize, Eigen, Equiv, Context, Export };
enum class Format { Csv, Json };

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitPropertyFailed = 4;

struct CommandResult {
  std::string output;  // the report, byte-for-byte
  int exit_code = kExitOk;
  std::string message;  // diagnostics for stderr
};

std::optional<Command> parse_command(std::string_view name);
std::optional<Format> parse_format(std::string_view name);
std::string_view command_name(Command cmd);

/// simulate defaults to CSV, everything else to JSON.
Format default_format(Command cmd);

/// Runs one analysis on an already-loaded config. Numerical errors propagate.
CommandResult run_command(Command cmd, const io::ExperimentConfig& config, Format format);

/// Loads the config and runs the command, mapping every library error to its
/// exit code instead of throwing.
CommandResult run(Command cmd, const std::filesystem::path& config_path, std::optional<Format> format);

}  // namespace rnnlinz::cli
