#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rnnlinz/cli.hpp"

namespace cli = rnnlinz::cli;

int main(int argc, char** argv) {
  CLI::App app{"Activation- and activity-space linearizations of discrete-time RNNs"};
  app.require_subcommand(1);

  std::string config;
  std::string out_path;
  std::string format;
  for (const char* name : {"simulate", "linearize", "eigen", "equiv", "context", "export"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  const auto cmd = cli::parse_command(app.get_subcommands().front()->get_name());
  const std::optional<cli::Format> fmt = format.empty() ? std::nullopt : cli::parse_format(format);
  const cli::CommandResult res = cli::run(*cmd, config, fmt);
  if (!res.message.empty()) std::cerr << "rnn-linz: " << res.message << '\n';
  if (res.exit_code == cli::kExitConfig || res.exit_code == cli::kExitNumerical) return res.exit_code;

  if (out_path.empty()) {
    std::cout << res.output;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "rnn-linz: cannot write " << out_path << '\n';
      return cli::kExitConfig;
    }
    out << res.output;
  }
  return res.exit_code;
}
