#include "latsim/sim_engine.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "latsim/errors.hpp"
#include "parallel.hpp"

namespace latsim {

void ScenarioConfig::validate() const {
  radio.validate();
  rsi.validate();
  traffic.validate();
  if (n_samples_per_slot < 1) throw ConfigError("n_samples_per_slot: must be >= 1");
  if (!(pd_target > 0.0 && pd_target < 1.0)) {
    std::ostringstream os;
    os << "pd_target: value " << pd_target << " out of range (0, 1)";
    throw ConfigError(os.str());
  }
  if (n_slots < 1) throw ConfigError("n_slots: must be >= 1");
  switch (protocol.kind) {
    case ProtocolKind::Lat:
      break;
    case ProtocolKind::Lbt:
      protocol.lbt.validate();
      break;
    case ProtocolKind::Dsa:
      protocol.dsa.validate();
      break;
  }
}

Trace::Trace(ScenarioConfig config) : config_(std::move(config)), n_nodes_(config_.n_nodes()) {}

SlotRecord Trace::record(std::uint64_t slot) const {
  SlotRecord r;
  r.slot_index = slot;
  r.pu_state = pu_[slot];
  const std::size_t base = slot * n_nodes_;
  r.actions = std::span<const SuAction>(actions_.data() + base, n_nodes_);
  r.decisions = std::span<const SensingDecision>(decisions_.data() + base, n_nodes_);
  r.statistics = std::span<const double>(statistics_.data() + base, n_nodes_);
  return r;
}

void Trace::reserve(std::uint64_t n_slots) {
  pu_.reserve(n_slots);
  actions_.reserve(n_slots * n_nodes_);
  decisions_.reserve(n_slots * n_nodes_);
  statistics_.reserve(n_slots * n_nodes_);
}

void Trace::append_slot(PuState pu, std::span<const SuAction> actions,
                        std::span<const SensingDecision> decisions,
                        std::span<const double> statistics) {
  pu_.push_back(pu);
  actions_.insert(actions_.end(), actions.begin(), actions.end());
  decisions_.insert(decisions_.end(), decisions.begin(), decisions.end());
  statistics_.insert(statistics_.end(), statistics.begin(), statistics.end());
}

SummaryAccumulator::SummaryAccumulator(const ScenarioConfig& config)
    : warmup_(config.warmup_slots), dsa_(config.protocol.kind == ProtocolKind::Dsa) {}

void SummaryAccumulator::add_slot(std::uint64_t slot_index, PuState pu,
                                  std::span<const SuAction> actions,
                                  std::span<const SensingDecision> decisions,
                                  std::span<const double> statistics) {
  if (slot_index < warmup_) return;
  summary_.counted_slots++;

  const bool busy = pu == PuState::Busy;
  std::size_t tx_count = 0;
  for (const SuAction a : actions) tx_count += a == SuAction::Transmit ? 1 : 0;
  const bool any_tx = tx_count > 0;

  if (busy) {
    summary_.busy_slots++;
    if (any_tx) summary_.busy_anytx_slots++;
    summary_.case_counts[any_tx ? 3 : 0]++;  // Case4 : Case1
  } else {
    summary_.idle_slots++;
    if (any_tx) summary_.idle_anytx_slots++;
    summary_.case_counts[any_tx ? 1 : 2]++;  // Case2 : Case3
  }

  for (std::size_t j = 0; j < actions.size(); ++j) {
    if (dsa_) {
      // Only idle-sensing nodes make a free/busy call; a NaN statistic marks
      // a node that did not sense (backoff or blind half-duplex packet).
      if (actions[j] == SuAction::Transmit || std::isnan(statistics[j])) continue;
      if (busy) {
        summary_.md_opportunities++;
        if (decisions[j] == SensingDecision::Idle) summary_.md_events++;
      } else if (tx_count == 0) {
        // With another SU on the air, deciding Busy is correct carrier
        // sense, so only clean-idle slots count as false-alarm chances.
        summary_.fa_opportunities++;
        if (decisions[j] == SensingDecision::Busy) summary_.fa_events++;
      }
    } else {
      if (busy) {
        summary_.md_opportunities++;
        if (decisions[j] == SensingDecision::Idle) summary_.md_events++;
      } else {
        summary_.fa_opportunities++;
        if (decisions[j] == SensingDecision::Busy) summary_.fa_events++;
      }
    }
  }

  const bool collision = (busy && any_tx) || tx_count >= 2;
  if (collision) {
    open_run_++;
  } else if (open_run_ > 0) {
    summary_.collision_durations.push_back(open_run_);
    open_run_ = 0;
  }
}

TraceSummary SummaryAccumulator::finish() {
  if (open_run_ > 0) {
    summary_.collision_durations.push_back(open_run_);
    open_run_ = 0;
  }
  return std::move(summary_);
}

namespace {

struct SlotSink {
  Trace& trace;
  SummaryAccumulator& acc;
  bool keep_records;

  void emit(std::uint64_t k, PuState pu, std::span<const SuAction> actions,
            std::span<const SensingDecision> decisions, std::span<const double> statistics) {
    acc.add_slot(k, pu, actions, decisions, statistics);
    if (keep_records) trace.append_slot(pu, actions, decisions, statistics);
  }
};

void run_lat(const ScenarioConfig& cfg, SlotSink& sink) {
  RngStream pu_rng(cfg.seed, kPuStreamId);
  RngStream su_rng(cfg.seed, node_stream_id(0));
  const ThresholdPair thresholds =
      make_threshold_pair(cfg.radio, cfg.rsi, cfg.n_samples_per_slot, cfg.pd_target);

  PuState pu = initial_pu_state(cfg.traffic, pu_rng);
  LatState state;
  std::vector<double> samples;
  for (std::uint64_t k = 0; k < cfg.n_slots; ++k) {
    if (k > 0) pu = step_pu_state(cfg.traffic, pu, pu_rng);
    const SuAction action = state.next_action;
    double power = cfg.radio.noise_power;
    if (pu == PuState::Busy) power += cfg.radio.pu_rx_power;
    if (action == SuAction::Transmit) power += rsi_slot_power(cfg.rsi, cfg.radio.tx_power, su_rng);
    sample_energies(power, cfg.n_samples_per_slot, su_rng, samples);
    const LatStepResult r = lat_step(state, thresholds, samples, action);
    sink.emit(k, pu, {&action, 1}, {&r.decision, 1}, {&r.statistic, 1});
    state = r.state;
  }
}

void run_lbt(const ScenarioConfig& cfg, SlotSink& sink) {
  RngStream pu_rng(cfg.seed, kPuStreamId);
  RngStream su_rng(cfg.seed, node_stream_id(0));
  // Both antennas sense during the sub-slot as an ideal uncorrelated pair,
  // doubling the sample count available to the statistic.
  const std::size_t n_sense =
      2 * lbt_sensing_sample_count(cfg.protocol.lbt, cfg.n_samples_per_slot);
  const double eps_silent = threshold_for_detection_target(
      cfg.radio.noise_power + cfg.radio.pu_rx_power, n_sense, cfg.pd_target);

  PuState pu = initial_pu_state(cfg.traffic, pu_rng);
  std::vector<double> samples;
  for (std::uint64_t k = 0; k < cfg.n_slots; ++k) {
    if (k > 0) pu = step_pu_state(cfg.traffic, pu, pu_rng);
    double power = cfg.radio.noise_power;
    if (pu == PuState::Busy) power += cfg.radio.pu_rx_power;
    sample_energies(power, n_sense, su_rng, samples);
    const LbtStepResult r = lbt_step(cfg.protocol.lbt, eps_silent, samples);
    sink.emit(k, pu, {&r.action, 1}, {&r.decision, 1}, {&r.statistic, 1});
  }
}

void run_dsa(const ScenarioConfig& cfg, SlotSink& sink) {
  const DsaConfig& dsa = cfg.protocol.dsa;
  RngStream pu_rng(cfg.seed, kPuStreamId);
  std::vector<RngStream> node_rngs;
  node_rngs.reserve(dsa.n_nodes);
  for (std::uint32_t j = 0; j < dsa.n_nodes; ++j) {
    node_rngs.emplace_back(cfg.seed, node_stream_id(j));
  }
  const double noise = cfg.radio.noise_power;
  const DsaThresholds thresholds{
      threshold_for_detection_target(noise + cfg.radio.pu_rx_power, cfg.n_samples_per_slot,
                                     cfg.pd_target),
      threshold_for_detection_target(
          noise + rsi_power(cfg.rsi, cfg.radio.tx_power) + dsa.su_rx_power,
          cfg.n_samples_per_slot, cfg.pd_target),
  };

  PuState pu = initial_pu_state(cfg.traffic, pu_rng);
  std::vector<DsaNodeState> nodes(dsa.n_nodes);
  std::vector<DsaNodeState> next_nodes(dsa.n_nodes);
  std::vector<SuAction> actions(dsa.n_nodes);
  std::vector<SensingDecision> decisions(dsa.n_nodes);
  std::vector<double> statistics(dsa.n_nodes);
  std::vector<double> samples;
  for (std::uint64_t k = 0; k < cfg.n_slots; ++k) {
    if (k > 0) pu = step_pu_state(cfg.traffic, pu, pu_rng);
    std::size_t tx_count = 0;
    for (const DsaNodeState& n : nodes) tx_count += n.mode == DsaMode::Transmitting ? 1 : 0;
    for (std::uint32_t j = 0; j < dsa.n_nodes; ++j) {
      const bool transmitting = nodes[j].mode == DsaMode::Transmitting;
      const bool senses =
          nodes[j].mode == DsaMode::Idle || (transmitting && dsa.fd_abort);
      std::span<const double> obs;
      if (senses) {
        double power = noise;
        if (pu == PuState::Busy) power += cfg.radio.pu_rx_power;
        power += dsa.su_rx_power * static_cast<double>(tx_count - (transmitting ? 1 : 0));
        if (transmitting) power += rsi_slot_power(cfg.rsi, cfg.radio.tx_power, node_rngs[j]);
        sample_energies(power, cfg.n_samples_per_slot, node_rngs[j], samples);
        obs = samples;
      }
      const DsaStepResult r = dsa_step(nodes[j], dsa, thresholds, obs, node_rngs[j]);
      actions[j] = transmitting ? SuAction::Transmit : SuAction::Silent;
      decisions[j] = r.decision;
      statistics[j] = r.statistic;
      next_nodes[j] = r.state;
    }
    sink.emit(k, pu, actions, decisions, statistics);
    nodes.swap(next_nodes);
  }
}

}  // namespace

Trace run_scenario(const ScenarioConfig& config) {
  config.validate();
  Trace trace(config);
  const bool keep_records = !config.thin_trace;
  if (keep_records) trace.reserve(config.n_slots);
  SummaryAccumulator acc(config);
  SlotSink sink{trace, acc, keep_records};
  switch (config.protocol.kind) {
    case ProtocolKind::Lat:
      run_lat(config, sink);
      break;
    case ProtocolKind::Lbt:
      run_lbt(config, sink);
      break;
    case ProtocolKind::Dsa:
      run_dsa(config, sink);
      break;
  }
  trace.set_summary(acc.finish());
  return trace;
}

std::vector<RunOutcome> run_many(std::span<const ScenarioConfig> configs, unsigned threads) {
  std::vector<RunOutcome> out(configs.size());
  detail::parallel_for(configs.size(), threads, [&](std::size_t i) {
    try {
      out[i].trace.emplace(run_scenario(configs[i]));
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

}  // namespace latsim
