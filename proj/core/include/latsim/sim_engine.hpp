#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latsim/protocols.hpp"
#include "latsim/radio_env.hpp"

namespace latsim {

enum class ProtocolKind : std::uint8_t { Lat, Lbt, Dsa };

struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::Lat;
  LbtConfig lbt{};
  DsaConfig dsa{};
};

/// Complete, seedable description of one experiment.
struct ScenarioConfig {
  RadioParams radio{};
  RsiModel rsi{};
  PuTrafficModel traffic{};
  std::uint32_t n_samples_per_slot = 100;
  ProtocolConfig protocol{};
  double pd_target = 0.96;
  std::uint64_t n_slots = 100000;
  std::uint64_t warmup_slots = 100;  // leading slots excluded from metrics
  std::uint64_t seed = 12345;
  bool thin_trace = false;  // keep only running tallies, drop per-slot records

  std::uint32_t n_nodes() const {
    return protocol.kind == ProtocolKind::Dsa ? protocol.dsa.n_nodes : 1;
  }

  void validate() const;  // throws ConfigError
};

/// Per-slot ground truth, viewed out of a trace.
struct SlotRecord {
  std::uint64_t slot_index = 0;
  PuState pu_state = PuState::Idle;
  std::span<const SuAction> actions;
  std::span<const SensingDecision> decisions;
  std::span<const double> statistics;
};

/// Running tallies over the post-warmup slots. Maintained by the engine while
/// it runs, so metrics stay available when per-slot records are thinned away.
struct TraceSummary {
  std::uint64_t counted_slots = 0;
  std::uint64_t busy_slots = 0;
  std::uint64_t idle_slots = 0;
  std::uint64_t busy_anytx_slots = 0;  // PU busy and at least one SU transmitting
  std::uint64_t idle_anytx_slots = 0;
  // Case1 = PU only, Case2 = SU only, Case3 = unused hole, Case4 = collision.
  // Multi-node traces classify at network level (any SU transmitting).
  std::array<std::uint64_t, 4> case_counts{};
  // Free/busy calls made against a known hypothesis. In DSA mode only
  // idle-sensing nodes are counted, and a slot where another SU transmits is
  // not a false-alarm opportunity (deciding Busy there is correct carrier
  // sense, not an error).
  std::uint64_t fa_opportunities = 0;
  std::uint64_t fa_events = 0;
  std::uint64_t md_opportunities = 0;
  std::uint64_t md_events = 0;
  /// Maximal runs of collision slots, in slots. A collision slot has either
  /// the PU busy with >= 1 SU transmitting, or >= 2 SUs transmitting. A run
  /// still open at the end of the trace is counted at its observed length.
  std::vector<std::uint64_t> collision_durations;
};

/// Ordered per-slot records plus the scenario that produced them.
class Trace {
 public:
  explicit Trace(ScenarioConfig config);

  const ScenarioConfig& config() const { return config_; }
  std::uint32_t n_nodes() const { return n_nodes_; }
  bool has_records() const { return !pu_.empty(); }
  std::uint64_t n_records() const { return pu_.size(); }

  PuState pu_state(std::uint64_t slot) const { return pu_[slot]; }
  SuAction action(std::uint32_t node, std::uint64_t slot) const {
    return actions_[slot * n_nodes_ + node];
  }
  SensingDecision decision(std::uint32_t node, std::uint64_t slot) const {
    return decisions_[slot * n_nodes_ + node];
  }
  double statistic(std::uint32_t node, std::uint64_t slot) const {
    return statistics_[slot * n_nodes_ + node];
  }
  SlotRecord record(std::uint64_t slot) const;

  const TraceSummary& summary() const { return summary_; }

  // Engine-side append API.
  void reserve(std::uint64_t n_slots);
  void append_slot(PuState pu, std::span<const SuAction> actions,
                   std::span<const SensingDecision> decisions, std::span<const double> statistics);
  void set_summary(TraceSummary summary) { summary_ = std::move(summary); }

 private:
  ScenarioConfig config_;
  std::uint32_t n_nodes_ = 1;
  std::vector<PuState> pu_;
  std::vector<SuAction> actions_;
  std::vector<SensingDecision> decisions_;
  std::vector<double> statistics_;
  TraceSummary summary_;
};

/// Feeds per-slot outcomes into a TraceSummary, skipping warmup. The engine
/// and the record re-scan in the metrics module share this one accumulator so
/// thinned and full traces always agree.
class SummaryAccumulator {
 public:
  explicit SummaryAccumulator(const ScenarioConfig& config);
  void add_slot(std::uint64_t slot_index, PuState pu, std::span<const SuAction> actions,
                std::span<const SensingDecision> decisions, std::span<const double> statistics);
  TraceSummary finish();

 private:
  std::uint64_t warmup_ = 0;
  bool dsa_ = false;
  TraceSummary summary_;
  std::uint64_t open_run_ = 0;
};

/// Run one scenario to a deterministic trace. The PU chain advances first in
/// each slot, then samples are synthesized against each node's committed
/// action, then the protocol machines step.
Trace run_scenario(const ScenarioConfig& config);

struct RunOutcome {
  std::optional<Trace> trace;
  std::string error;  // non-empty if this config failed
};

/// Run several scenarios; results match sequential run_scenario calls
/// regardless of execution order. threads = 0 picks the hardware count.
std::vector<RunOutcome> run_many(std::span<const ScenarioConfig> configs, unsigned threads = 1);

}  // namespace latsim
