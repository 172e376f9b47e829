#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "config_file.hpp"
#include "csv.hpp"
#include "latsim/analysis.hpp"
#include "latsim/errors.hpp"
#include "latsim/metrics.hpp"
#include "latsim/sensing.hpp"

namespace latsim::cli {

namespace {

namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* protocol_name(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::Lat:
      return "lat";
    case ProtocolKind::Lbt:
      return "lbt";
    case ProtocolKind::Dsa:
      return "dsa";
  }
  return "lat";
}

ResolvedConfig load_with_overrides(const CliOptions& options) {
  ResolvedConfig config = load_config(options.config_path);
  if (options.seed) config.scenario.seed = *options.seed;
  if (options.slots) {
    config.scenario.n_slots = *options.slots;
    if (config.scenario.warmup_slots >= config.scenario.n_slots) {
      throw ConfigError("warmup_slots: must be < n_slots (after --slots override)");
    }
  }
  return config;
}

fs::path prepare_out_dir(const CliOptions& options) {
  const fs::path dir(options.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_manifest(const fs::path& dir, const ResolvedConfig& config, const char* command,
                    const CliOptions& options) {
  std::ofstream out(dir / "manifest.ini", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
  out << render_manifest(config, ManifestMeta{command, options.config_path, options.out_dir});
  if (!out) throw std::runtime_error("manifest write failed in " + dir.string());
}

void write_trace_csv(const fs::path& path, const Trace& trace) {
  CsvWriter csv(path, {"slot", "pu_busy", "node", "action", "decision", "statistic"});
  for (std::uint64_t k = 0; k < trace.n_records(); ++k) {
    for (std::uint32_t j = 0; j < trace.n_nodes(); ++j) {
      csv.write_row({std::to_string(k),
                     trace.pu_state(k) == PuState::Busy ? "1" : "0",
                     std::to_string(j),
                     trace.action(j, k) == SuAction::Transmit ? "1" : "0",
                     trace.decision(j, k) == SensingDecision::Busy ? "1" : "0",
                     csv_number(trace.statistic(j, k))});
    }
  }
  csv.close();
}

void write_metrics_csv(const fs::path& path, const ScenarioConfig& config, const Metrics& m) {
  CsvWriter csv(path, {"protocol", "chi_sq", "tx_power", "su_link_snr", "n_slots",
                       "warmup_slots", "seed", "collision_ratio", "waste_ratio", "rate",
                       "throughput", "false_alarm_rate", "missed_detection_rate",
                       "mean_collision_duration", "case1", "case2", "case3", "case4"});
  csv.write_row({protocol_name(config.protocol.kind), csv_number(config.rsi.chi_sq),
                 csv_number(config.radio.tx_power), csv_number(config.radio.su_link_snr),
                 std::to_string(config.n_slots), std::to_string(config.warmup_slots),
                 std::to_string(config.seed), csv_number(m.collision_ratio),
                 csv_number(m.waste_ratio), csv_number(m.rate), csv_number(m.throughput),
                 csv_number(m.false_alarm_rate), csv_number(m.missed_detection_rate),
                 csv_number(m.mean_collision_duration), csv_number(m.case_fractions[0]),
                 csv_number(m.case_fractions[1]), csv_number(m.case_fractions[2]),
                 csv_number(m.case_fractions[3])});
  csv.close();
}

void write_summary_csv(const fs::path& path, const TraceSummary& s) {
  std::uint64_t collision_slots = 0;
  for (const std::uint64_t d : s.collision_durations) collision_slots += d;
  CsvWriter csv(path, {"counted_slots", "busy_slots", "idle_slots", "busy_anytx_slots",
                       "idle_anytx_slots", "case1_count", "case2_count", "case3_count",
                       "case4_count", "fa_events", "fa_opportunities", "md_events",
                       "md_opportunities", "collision_runs", "collision_slots_total"});
  csv.write_row({std::to_string(s.counted_slots), std::to_string(s.busy_slots),
                 std::to_string(s.idle_slots), std::to_string(s.busy_anytx_slots),
                 std::to_string(s.idle_anytx_slots), std::to_string(s.case_counts[0]),
                 std::to_string(s.case_counts[1]), std::to_string(s.case_counts[2]),
                 std::to_string(s.case_counts[3]), std::to_string(s.fa_events),
                 std::to_string(s.fa_opportunities), std::to_string(s.md_events),
                 std::to_string(s.md_opportunities),
                 std::to_string(s.collision_durations.size()),
                 std::to_string(collision_slots)});
  csv.close();
}

}  // namespace

int cmd_run(const CliOptions& options) {
  const ResolvedConfig config = load_with_overrides(options);
  const fs::path dir = prepare_out_dir(options);
  write_manifest(dir, config, "run", options);

  const Trace trace = run_scenario(config.scenario);
  const Metrics metrics = compute_metrics(trace);
  write_metrics_csv(dir / "metrics.csv", config.scenario, metrics);
  write_summary_csv(dir / "trace_summary.csv", summarize(trace));
  if (options.dump_trace) {
    if (!trace.has_records()) {
      throw ConfigError("--trace: cannot dump a thinned trace (thin_trace = true)");
    }
    write_trace_csv(dir / "trace.csv", trace);
  }
  std::cout << "run: " << protocol_name(config.scenario.protocol.kind) << ", "
            << config.scenario.n_slots << " slots -> " << (dir / "metrics.csv").string() << "\n";
  return kExitOk;
}

int cmd_sweep(const CliOptions& options) {
  const ResolvedConfig config = load_with_overrides(options);
  const fs::path dir = prepare_out_dir(options);
  write_manifest(dir, config, "sweep", options);

  const std::vector<double> grid =
      log_power_grid(config.sweep.tx_power_min, config.sweep.tx_power_max,
                     config.sweep.grid_points);
  CsvWriter csv(dir / "power_sweep.csv", {"tx_power", "chi_sq", "C_sim", "C_analytic", "Pw",
                                          "Pc", "Pf", "Pd", "local_opt"});
  for (const double chi_sq : config.sweep.chi_sq_list) {
    ScenarioConfig base = config.scenario;
    base.rsi.chi_sq = chi_sq;
    const PowerSweepResult sweep = power_sweep(base, grid, options.threads);
    for (std::size_t i = 0; i < sweep.points.size(); ++i) {
      const SweepPoint& p = sweep.points[i];
      if (!p.error.empty()) {
        std::cerr << "sweep point tx_power=" << p.tx_power << " chi_sq=" << chi_sq
                  << " failed: " << p.error << "\n";
      }
      const bool is_opt =
          sweep.local_optimum && sweep.local_optimum->first == sweep.grid[i];
      csv.write_row({csv_number(p.tx_power), csv_number(chi_sq),
                     csv_number(p.simulated ? p.simulated->throughput : kNaN),
                     csv_number(p.analytic ? p.analytic->throughput : kNaN),
                     csv_number(p.simulated ? p.simulated->waste_ratio : kNaN),
                     csv_number(p.simulated ? p.simulated->collision_ratio : kNaN),
                     csv_number(p.simulated ? p.simulated->false_alarm_rate : kNaN),
                     csv_number(p.simulated ? 1.0 - p.simulated->missed_detection_rate : kNaN),
                     is_opt ? "1" : "0"});
    }
  }
  csv.close();
  std::cout << "sweep: " << grid.size() << " powers x " << config.sweep.chi_sq_list.size()
            << " chi_sq -> " << (dir / "power_sweep.csv").string() << "\n";
  return kExitOk;
}

int cmd_compare(const CliOptions& options) {
  const ResolvedConfig config = load_with_overrides(options);
  const fs::path dir = prepare_out_dir(options);
  write_manifest(dir, config, "compare", options);

  const std::vector<double> grid =
      log_power_grid(config.sweep.tx_power_min, config.sweep.tx_power_max,
                     config.sweep.grid_points);
  const std::vector<CompareRow> rows =
      compare_lat_lbt(config.scenario, grid, config.sweep.tau_list, options.threads);

  CsvWriter csv(dir / "compare.csv", {"tx_power", "protocol", "tau", "throughput",
                                      "waste_ratio", "collision_ratio", "is_best_tau"});
  for (const CompareRow& row : rows) {
    csv.write_row({csv_number(row.tx_power), "lat", "0", csv_number(row.lat.throughput),
                   csv_number(row.lat.waste_ratio), csv_number(row.lat.collision_ratio), "0"});
    for (std::size_t t = 0; t < row.lbt.size(); ++t) {
      const LbtTauPoint& p = row.lbt[t];
      csv.write_row({csv_number(row.tx_power), "lbt", csv_number(p.tau),
                     csv_number(p.metrics.throughput), csv_number(p.metrics.waste_ratio),
                     csv_number(p.metrics.collision_ratio),
                     t == row.best_tau_index ? "1" : "0"});
    }
  }
  csv.close();
  std::cout << "compare: " << rows.size() << " powers x " << config.sweep.tau_list.size()
            << " tau -> " << (dir / "compare.csv").string() << "\n";
  return kExitOk;
}

int cmd_dsa(const CliOptions& options) {
  ResolvedConfig config = load_with_overrides(options);
  config.scenario.protocol.kind = ProtocolKind::Dsa;
  const fs::path dir = prepare_out_dir(options);
  write_manifest(dir, config, "dsa", options);

  ScenarioConfig off = config.scenario;
  off.protocol.dsa.fd_abort = false;
  ScenarioConfig on = config.scenario;
  on.protocol.dsa.fd_abort = true;
  const std::vector<ScenarioConfig> configs = {off, on};
  const std::vector<RunOutcome> runs = run_many(configs, options.threads);
  for (const RunOutcome& r : runs) {
    if (!r.trace) throw std::runtime_error("dsa run failed: " + r.error);
  }

  CsvWriter csv(dir / "dsa.csv",
                {"fd_abort", "n_nodes", "packet_len", "backoff_window", "counted_slots",
                 "collision_runs", "collision_slots_total", "mean_collision_duration",
                 "max_collision_duration", "spectrum_utilization"});
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Trace& trace = *runs[i].trace;
    const TraceSummary s = summarize(trace);
    std::uint64_t total = 0;
    std::uint64_t max_run = 0;
    for (const std::uint64_t d : s.collision_durations) {
      total += d;
      max_run = std::max(max_run, d);
    }
    const double mean = s.collision_durations.empty()
                            ? 0.0
                            : static_cast<double>(total) /
                                  static_cast<double>(s.collision_durations.size());
    double utilization = kNaN;
    try {
      utilization = 1.0 - waste_ratio(trace);
    } catch (const UndefinedMetricError&) {
      // PU never idle after warmup; leave NaN.
    }
    const DsaConfig& d = trace.config().protocol.dsa;
    csv.write_row({i == 0 ? "0" : "1", std::to_string(d.n_nodes), std::to_string(d.packet_len),
                   std::to_string(d.backoff_window), std::to_string(s.counted_slots),
                   std::to_string(s.collision_durations.size()), std::to_string(total),
                   csv_number(mean), std::to_string(max_run), csv_number(utilization)});
    if (options.dump_trace) {
      write_trace_csv(dir / (i == 0 ? "dsa_trace_hd.csv" : "dsa_trace_fd.csv"), trace);
    }
  }
  csv.close();
  std::cout << "dsa: abort off/on -> " << (dir / "dsa.csv").string() << "\n";
  return kExitOk;
}

namespace {

struct SelftestReport {
  int failures = 0;

  void check(bool ok, const std::string& name, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  }
};

}  // namespace

int cmd_selftest() {
  SelftestReport report;

  {
    // Gaussian tail inverse against tabulated quantiles.
    struct Row {
      double p, x;
    };
    const Row rows[] = {{0.5, 0.0},
                        {0.1, 1.2815515655446004},
                        {0.9, -1.2815515655446004},
                        {0.025, 1.9599639845400545},
                        {0.01, 2.3263478740408408},
                        {0.001, 3.0902323061678132}};
    double worst = 0.0;
    for (const Row& r : rows) {
      worst = std::max(worst, std::abs(normal_upper_tail_inv(r.p) - r.x));
    }
    report.check(worst < 1e-8, "gaussian tail inverse vs tabulated values",
                 "max error " + csv_number(worst));
  }
  {
    double worst = 0.0;
    for (const double pd : {0.9, 0.99, 0.5, 0.96}) {
      const double thr = threshold_for_detection_target(2.0, 100, pd);
      worst = std::max(worst, std::abs(analytic_detection(thr, 2.0, 100) - pd));
    }
    report.check(worst < 1e-9, "detection threshold round trip", "max error " + csv_number(worst));
  }
  {
    // Desk-scale Monte Carlo cross-check of the analytic tail model.
    const std::size_t n = 100;
    const std::size_t trials = 100000;
    RngStream rng(2024, 7);
    const double h0 = 1.0;
    const double h1 = 2.0;
    const double thr_fa = h0 * (1.0 + normal_upper_tail_inv(0.1) / std::sqrt(double(n)));
    const double thr_det = threshold_for_detection_target(h1, n, 0.9);
    std::size_t fa = 0;
    std::size_t det = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      double s0 = 0.0;
      double s1 = 0.0;
      for (std::size_t i = 0; i < n; ++i) s0 += rng.next_exponential(h0);
      for (std::size_t i = 0; i < n; ++i) s1 += rng.next_exponential(h1);
      fa += s0 / double(n) > thr_fa ? 1 : 0;
      det += s1 / double(n) > thr_det ? 1 : 0;
    }
    const double fa_rate = double(fa) / double(trials);
    const double det_rate = double(det) / double(trials);
    const bool ok = std::abs(fa_rate - 0.1) < 0.01 && std::abs(det_rate - 0.9) < 0.01;
    report.check(ok, "analytic tail model vs Monte Carlo (n=100)",
                 "fa " + csv_number(fa_rate) + " vs 0.1, det " + csv_number(det_rate) +
                     " vs 0.9");
  }
  {
    ScenarioConfig cfg;
    const ChainStationary chain = analytic_case_probabilities(cfg);
    double sum = 0.0;
    for (const double v : chain.distribution) sum += v;
    const bool ok = chain.ergodic && std::abs(sum - 1.0) < 1e-12 && chain.residual < 1e-10;
    report.check(ok, "stationary chain normalization and residual",
                 "sum " + csv_number(sum) + ", residual " + csv_number(chain.residual));
  }
  {
    ScenarioConfig cfg;
    cfg.n_slots = 20000;
    cfg.warmup_slots = 100;
    const Trace a = run_scenario(cfg);
    const Trace b = run_scenario(cfg);
    const TraceSummary sa = summarize(a);
    const TraceSummary sb = summarize(b);
    const bool ok = sa.case_counts == sb.case_counts && sa.fa_events == sb.fa_events &&
                    sa.md_events == sb.md_events &&
                    sa.collision_durations == sb.collision_durations;
    report.check(ok, "identical seed reproduces identical runs", "");
  }

  std::cout << (report.failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
  return report.failures == 0 ? kExitOk : kExitSelftestFailed;
}

}  // namespace latsim::cli
