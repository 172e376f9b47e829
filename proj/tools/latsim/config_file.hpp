#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "latsim/sim_engine.hpp"

namespace latsim::cli {

/// Grid description for the sweep/compare subcommands.
struct SweepSpec {
  double tx_power_min = 10.0;
  double tx_power_max = 100000.0;
  std::size_t grid_points = 40;
  std::vector<double> chi_sq_list = {0.1, 0.01, 0.001};
  std::vector<double> tau_list = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
};

struct ResolvedConfig {
  ScenarioConfig scenario;
  SweepSpec sweep;
};

/// Parse INI-style key = value text into a fully validated configuration.
/// Unknown keys, malformed values and out-of-range values raise ConfigError
/// naming the key and the accepted range. LATSIM_<UPPERCASED KEY> environment
/// variables override file values; an empty text yields the documented
/// defaults. Giving both a linear key and its _db twin is an error.
ResolvedConfig resolve_config_text(const std::string& text);

/// Load and resolve a config file; an empty path resolves the defaults
/// (still subject to environment overrides).
ResolvedConfig load_config(const std::string& path);

struct ManifestMeta {
  std::string command;
  std::string source_config;  // empty when defaults were used
  std::string out_dir;
};

/// Manifest text: provenance plus every resolved key, written with exact
/// (round-trippable) numeric values so a re-run reproduces outputs
/// byte-identically. A manifest is itself a valid config file; its [meta]
/// section is ignored on load.
std::string render_manifest(const ResolvedConfig& config, const ManifestMeta& meta);

}  // namespace latsim::cli
