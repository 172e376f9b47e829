#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace latsim::cli {

// Exit codes: 0 success, 1 selftest failure, 2 configuration error,
// 3 runtime/IO error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSelftestFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

struct CliOptions {
  std::string config_path;
  std::string out_dir = "latsim_out";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> slots;
  unsigned threads = 1;  // 0 = hardware concurrency
  bool dump_trace = false;
};

int cmd_run(const CliOptions& options);
int cmd_sweep(const CliOptions& options);
int cmd_compare(const CliOptions& options);
int cmd_dsa(const CliOptions& options);
int cmd_selftest();

}  // namespace latsim::cli
