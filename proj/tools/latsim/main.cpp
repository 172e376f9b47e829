#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "latsim/errors.hpp"
#include "latsim/version.hpp"

namespace {

void add_common_options(CLI::App* cmd, latsim::cli::CliOptions& options, bool with_trace) {
  cmd->add_option("--config", options.config_path, "Scenario config file (INI key = value)");
  cmd->add_option("--seed", options.seed, "Master seed override");
  cmd->add_option("--slots", options.slots, "Slot count override");
  cmd->add_option("--out", options.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--threads", options.threads, "Worker threads, 0 = auto")
      ->capture_default_str();
  if (with_trace) {
    cmd->add_flag("--trace", options.dump_trace, "Also dump the full per-slot trace CSV");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latsim: full-duplex cognitive-radio MAC simulator and analysis toolkit"};
  app.set_version_flag("--version", latsim::kVersion);
  app.require_subcommand(1);

  latsim::cli::CliOptions options;
  auto* run = app.add_subcommand("run", "Run one scenario and write metrics CSVs");
  add_common_options(run, options, true);
  auto* sweep = app.add_subcommand("sweep", "Power-throughput sweep over a transmit-power grid");
  add_common_options(sweep, options, false);
  auto* compare =
      app.add_subcommand("compare", "Listen-and-talk vs listen-before-talk comparison");
  add_common_options(compare, options, false);
  auto* dsa = app.add_subcommand("dsa", "Multi-node spectrum access, abort on vs off");
  add_common_options(dsa, options, true);
  app.add_subcommand("selftest", "Run the built-in analytic vs Monte Carlo checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : latsim::cli::kExitConfigError;
  }

  try {
    if (run->parsed()) return latsim::cli::cmd_run(options);
    if (sweep->parsed()) return latsim::cli::cmd_sweep(options);
    if (compare->parsed()) return latsim::cli::cmd_compare(options);
    if (dsa->parsed()) return latsim::cli::cmd_dsa(options);
    return latsim::cli::cmd_selftest();
  } catch (const latsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return latsim::cli::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return latsim::cli::kExitRuntimeError;
  }
}
