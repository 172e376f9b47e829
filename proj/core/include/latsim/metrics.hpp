#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "latsim/sim_engine.hpp"

namespace latsim {

/// Performance metrics of one trace. throughput = rate * (1 - waste_ratio)
/// holds exactly by construction.
struct Metrics {
  double collision_ratio = 0.0;        // Pc: fraction of PU air time collided with
  double waste_ratio = 0.0;            // Pw: fraction of spectrum holes left unused
  double rate = 0.0;                   // R = log2(1 + gamma_t), bits/s/Hz
  double throughput = 0.0;             // C = R * (1 - Pw)
  double false_alarm_rate = 0.0;
  double missed_detection_rate = 0.0;
  double mean_collision_duration = 0.0;  // slots; 0 when there were no collisions
  std::array<double, 4> case_fractions{};  // Case1..Case4, sums to 1
};

/// Link rate R = log2(1 + gamma_t).
double rate(double su_link_snr);

/// C = R * (1 - Pw).
double throughput(double rate, double waste_ratio);

/// Fraction of one slot an SU's transmission actually occupies: 1 for
/// listen-and-talk and DSA, (1 - tau) for listen-before-talk, whose sensing
/// sub-slot never carries data.
double transmit_occupancy(const ScenarioConfig& config);

/// Post-warmup tallies: re-scans the records, or returns the stored summary
/// when the trace was thinned. Both paths share one accumulator, so they
/// agree exactly.
TraceSummary summarize(const Trace& trace);

/// Pc = (occupied PU air time overlapped by SU transmission) / (PU air time).
/// Throws UndefinedMetricError if the PU was never busy after warmup.
double collision_ratio(const Trace& trace);

/// Pw = (idle air time left unused) / (idle air time). Sub-slot sensing
/// overhead counts as waste. Throws if the PU was never idle after warmup.
double waste_ratio(const Trace& trace);

/// Lengths of maximal collision runs, in slots.
std::vector<std::uint64_t> collision_durations(const Trace& trace);

/// {false alarm rate, missed detection rate}; throws if a hypothesis never
/// occurred after warmup.
std::pair<double, double> sensing_error_rates(const Trace& trace);

/// Fractions of post-warmup slots in Case1..Case4.
std::array<double, 4> case_fractions(const Trace& trace);

/// All metrics of one trace; requires both hypotheses present after warmup.
Metrics compute_metrics(const Trace& trace);

}  // namespace latsim
