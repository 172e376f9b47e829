#include "latsim/protocols.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "latsim/errors.hpp"

namespace latsim {

LatStepResult lat_step(const LatState& state, const ThresholdPair& thresholds,
                       std::span<const double> slot_samples, SuAction own_action_this_slot) {
  (void)state;
  const double statistic = energy_statistic(slot_samples);
  const double threshold = own_action_this_slot == SuAction::Transmit ? thresholds.eps_active
                                                                      : thresholds.eps_silent;
  const SensingDecision decision = decide(statistic, threshold);
  LatState next;
  next.last_decision = decision;
  next.next_action = decision == SensingDecision::Idle ? SuAction::Transmit : SuAction::Silent;
  return LatStepResult{next, decision, statistic};
}

void LbtConfig::validate() const {
  if (!(sensing_fraction > 0.0 && sensing_fraction < 1.0)) {
    std::ostringstream os;
    os << "sensing_fraction: value " << sensing_fraction << " out of range (0, 1)";
    throw ConfigError(os.str());
  }
}

std::size_t lbt_sensing_sample_count(const LbtConfig& config, std::size_t n_samples_per_slot) {
  const double exact = config.sensing_fraction * static_cast<double>(n_samples_per_slot);
  auto n = static_cast<std::size_t>(std::ceil(exact));
  if (n < 1) n = 1;
  if (n > n_samples_per_slot) n = n_samples_per_slot;
  return n;
}

LbtStepResult lbt_step(const LbtConfig& config, double eps_silent,
                       std::span<const double> sensing_samples) {
  (void)config;
  const double statistic = energy_statistic(sensing_samples);
  const SensingDecision decision = decide(statistic, eps_silent);
  const SuAction action =
      decision == SensingDecision::Idle ? SuAction::Transmit : SuAction::Silent;
  return LbtStepResult{action, decision, statistic};
}

void DsaConfig::validate() const {
  if (n_nodes < 1) throw ConfigError("n_nodes: must be >= 1");
  if (backoff_window < 1) throw ConfigError("backoff_window: must be >= 1");
  if (packet_len < 1) throw ConfigError("packet_len: must be >= 1");
  if (!(std::isfinite(su_rx_power) && su_rx_power >= 0.0)) {
    std::ostringstream os;
    os << "su_rx_power: value " << su_rx_power << " must be finite and >= 0";
    throw ConfigError(os.str());
  }
}

DsaStepResult dsa_step(const DsaNodeState& node, const DsaConfig& config,
                       const DsaThresholds& thresholds, std::span<const double> observation,
                       RngStream& rng) {
  DsaStepResult result;
  result.statistic = std::numeric_limits<double>::quiet_NaN();
  switch (node.mode) {
    case DsaMode::Idle: {
      result.statistic = energy_statistic(observation);
      result.decision = decide(result.statistic, thresholds.eps_idle);
      if (result.decision == SensingDecision::Idle) {
        result.state = DsaNodeState{DsaMode::Transmitting, 0, config.packet_len};
        result.started_packet = true;
      } else {
        result.state = DsaNodeState{DsaMode::Idle, 0, 0};
      }
      return result;
    }
    case DsaMode::Transmitting: {
      const bool last_slot = node.packet_remaining <= 1;
      if (!config.fd_abort) {
        // Half-duplex: blind while transmitting, runs the packet out, then
        // re-senses for one slot before the next packet.
        result.decision = SensingDecision::Busy;
        result.state = last_slot
                           ? DsaNodeState{DsaMode::Idle, 0, 0}
                           : DsaNodeState{DsaMode::Transmitting, 0, node.packet_remaining - 1};
        return result;
      }
      result.statistic = energy_statistic(observation);
      result.decision = decide(result.statistic, thresholds.eps_abort);
      if (result.decision == SensingDecision::Busy) {
        if (last_slot) {
          // Packet just completed; nothing to abort, go sense.
          result.state = DsaNodeState{DsaMode::Idle, 0, 0};
        } else {
          result.aborted = true;
          result.state = DsaNodeState{DsaMode::Backoff, rng.next_below(config.backoff_window), 0};
        }
      } else if (last_slot) {
        // Channel still looks free at packet end: chain the next packet.
        result.state = DsaNodeState{DsaMode::Transmitting, 0, config.packet_len};
        result.started_packet = true;
      } else {
        result.state = DsaNodeState{DsaMode::Transmitting, 0, node.packet_remaining - 1};
      }
      return result;
    }
    case DsaMode::Backoff: {
      result.decision = SensingDecision::Busy;
      result.state = node.backoff_remaining > 0
                         ? DsaNodeState{DsaMode::Backoff, node.backoff_remaining - 1, 0}
                         : DsaNodeState{DsaMode::Idle, 0, 0};
      return result;
    }
  }
  return result;
}

}  // namespace latsim
