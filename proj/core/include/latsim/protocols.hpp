#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "latsim/rng.hpp"
#include "latsim/sensing.hpp"

namespace latsim {

enum class SuAction : std::uint8_t { Silent, Transmit };

// ---------------------------------------------------------------------------
// Listen-and-talk: sense the whole slot while (possibly) transmitting, decide
// at the slot boundary, act in the next slot. The decision in slot k is the
// only input to the action in slot k+1.
// ---------------------------------------------------------------------------

struct LatState {
  SuAction next_action = SuAction::Silent;
  SensingDecision last_decision = SensingDecision::Busy;
};

struct LatStepResult {
  LatState state;
  SensingDecision decision;
  double statistic = 0.0;
};

/// One slot of the listen-and-talk machine. Selects eps_active when the node
/// transmitted during the sensed slot (its own RSI raises the floor),
/// eps_silent otherwise; commits Transmit for the next slot iff the decision
/// is Idle.
LatStepResult lat_step(const LatState& state, const ThresholdPair& thresholds,
                       std::span<const double> slot_samples, SuAction own_action_this_slot);

// ---------------------------------------------------------------------------
// Listen-before-talk: a leading sub-slot of relative length tau is spent
// sensing (silently), the remainder transmitting if the channel was judged
// idle. The node is blind to anything that happens after its sensing
// sub-slot within the same slot.
// ---------------------------------------------------------------------------

struct LbtConfig {
  double sensing_fraction = 0.1;  // tau in (0, 1)

  void validate() const;
};

/// Samples available to one antenna during the sensing sub-slot:
/// ceil(tau * n_samples_per_slot).
std::size_t lbt_sensing_sample_count(const LbtConfig& config, std::size_t n_samples_per_slot);

struct LbtStepResult {
  SuAction action;
  SensingDecision decision;
  double statistic = 0.0;
};

/// One slot of the listen-before-talk machine. The sensing samples are
/// RSI-free (the node is silent while sensing) so only the silent threshold
/// applies; the returned action covers the remaining (1 - tau) of this slot.
LbtStepResult lbt_step(const LbtConfig& config, double eps_silent,
                       std::span<const double> sensing_samples);

// ---------------------------------------------------------------------------
// Distributed spectrum access: M contending nodes, slotted, each sensing with
// the listen-and-talk discipline. A full-duplex node keeps sensing while
// transmitting and aborts its packet the moment the statistic exceeds the
// collision threshold; a half-duplex node is blind until the packet ends.
// ---------------------------------------------------------------------------

enum class DsaMode : std::uint8_t { Idle, Transmitting, Backoff };

struct DsaNodeState {
  DsaMode mode = DsaMode::Idle;
  std::uint32_t backoff_remaining = 0;  // in [0, backoff_window - 1]
  std::uint32_t packet_remaining = 0;   // slots left of the current packet
};

struct DsaConfig {
  std::uint32_t n_nodes = 4;
  std::uint32_t backoff_window = 8;  // abort backoff drawn uniformly from {0..W-1}
  std::uint32_t packet_len = 10;     // slots per packet
  bool fd_abort = true;              // false: half-duplex baseline, no mid-packet abort
  double su_rx_power = 1.0;          // power of one transmitting SU at another SU's sensor

  void validate() const;
};

struct DsaThresholds {
  double eps_idle = 0.0;   // free/busy call while idle-sensing
  double eps_abort = 0.0;  // collision call while transmitting (own RSI floor)
};

struct DsaStepResult {
  DsaNodeState state;
  SensingDecision decision;
  double statistic = 0.0;  // NaN when the node made no measurement
  bool aborted = false;
  bool started_packet = false;
};

/// Advance one node by one slot. The observation holds the node's per-sample
/// energies for this slot (PU, other transmitters and own RSI included). A
/// node that does not sense — one in backoff, or a half-duplex node mid
/// packet — ignores it and may pass an empty span; its statistic is NaN and
/// its decision a Busy placeholder.
///
/// Traffic is saturated: an idle node that judges the channel free starts a
/// packet in the next slot, and a full-duplex node whose in-packet sensing
/// still says free chains the next packet back to back.
DsaStepResult dsa_step(const DsaNodeState& node, const DsaConfig& config,
                       const DsaThresholds& thresholds, std::span<const double> observation,
                       RngStream& rng);

}  // namespace latsim
