#include "latsim/metrics.hpp"

#include <cmath>

#include "latsim/errors.hpp"

namespace latsim {

double rate(double su_link_snr) { return std::log2(1.0 + su_link_snr); }

double throughput(double rate, double waste_ratio) { return rate * (1.0 - waste_ratio); }

double transmit_occupancy(const ScenarioConfig& config) {
  if (config.protocol.kind == ProtocolKind::Lbt) {
    return 1.0 - config.protocol.lbt.sensing_fraction;
  }
  return 1.0;
}

TraceSummary summarize(const Trace& trace) {
  if (!trace.has_records()) return trace.summary();
  SummaryAccumulator acc(trace.config());
  for (std::uint64_t k = 0; k < trace.n_records(); ++k) {
    const SlotRecord r = trace.record(k);
    acc.add_slot(k, r.pu_state, r.actions, r.decisions, r.statistics);
  }
  return acc.finish();
}

namespace {

double collision_ratio_from(const TraceSummary& s, double occupancy) {
  if (s.busy_slots == 0) {
    throw UndefinedMetricError("collision_ratio: no PU-busy slots after warmup");
  }
  return occupancy * static_cast<double>(s.busy_anytx_slots) / static_cast<double>(s.busy_slots);
}

double waste_ratio_from(const TraceSummary& s, double occupancy) {
  if (s.idle_slots == 0) {
    throw UndefinedMetricError("waste_ratio: no PU-idle slots after warmup");
  }
  const double unused = static_cast<double>(s.idle_slots - s.idle_anytx_slots) +
                        (1.0 - occupancy) * static_cast<double>(s.idle_anytx_slots);
  return unused / static_cast<double>(s.idle_slots);
}

}  // namespace

double collision_ratio(const Trace& trace) {
  return collision_ratio_from(summarize(trace), transmit_occupancy(trace.config()));
}

double waste_ratio(const Trace& trace) {
  return waste_ratio_from(summarize(trace), transmit_occupancy(trace.config()));
}

std::vector<std::uint64_t> collision_durations(const Trace& trace) {
  return summarize(trace).collision_durations;
}

std::pair<double, double> sensing_error_rates(const Trace& trace) {
  const TraceSummary s = summarize(trace);
  if (s.fa_opportunities == 0) {
    throw UndefinedMetricError("sensing_error_rates: idle hypothesis never sensed after warmup");
  }
  if (s.md_opportunities == 0) {
    throw UndefinedMetricError("sensing_error_rates: busy hypothesis never sensed after warmup");
  }
  return {static_cast<double>(s.fa_events) / static_cast<double>(s.fa_opportunities),
          static_cast<double>(s.md_events) / static_cast<double>(s.md_opportunities)};
}

std::array<double, 4> case_fractions(const Trace& trace) {
  const TraceSummary s = summarize(trace);
  if (s.counted_slots == 0) {
    throw UndefinedMetricError("case_fractions: no slots after warmup");
  }
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = static_cast<double>(s.case_counts[i]) / static_cast<double>(s.counted_slots);
  }
  return out;
}

Metrics compute_metrics(const Trace& trace) {
  const TraceSummary s = summarize(trace);
  if (s.counted_slots == 0) {
    throw UndefinedMetricError("compute_metrics: no slots after warmup");
  }
  const double occupancy = transmit_occupancy(trace.config());
  Metrics m;
  m.collision_ratio = collision_ratio_from(s, occupancy);
  m.waste_ratio = waste_ratio_from(s, occupancy);
  m.rate = rate(trace.config().radio.su_link_snr);
  m.throughput = throughput(m.rate, m.waste_ratio);
  if (s.fa_opportunities > 0) {
    m.false_alarm_rate =
        static_cast<double>(s.fa_events) / static_cast<double>(s.fa_opportunities);
  }
  if (s.md_opportunities > 0) {
    m.missed_detection_rate =
        static_cast<double>(s.md_events) / static_cast<double>(s.md_opportunities);
  }
  if (!s.collision_durations.empty()) {
    std::uint64_t total = 0;
    for (const std::uint64_t d : s.collision_durations) total += d;
    m.mean_collision_duration =
        static_cast<double>(total) / static_cast<double>(s.collision_durations.size());
  }
  for (std::size_t i = 0; i < 4; ++i) {
    m.case_fractions[i] =
        static_cast<double>(s.case_counts[i]) / static_cast<double>(s.counted_slots);
  }
  return m;
}

}  // namespace latsim
