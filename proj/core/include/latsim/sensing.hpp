#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "latsim/radio_env.hpp"

namespace latsim {

enum class SensingDecision : std::uint8_t { Busy, Idle };

/// Energy-detection thresholds used by a full-duplex sensor depending on its
/// own activity in the sensed slot. With nonzero residual self-interference
/// the active-branch noise floor is elevated, so eps_active >= eps_silent.
struct ThresholdPair {
  double eps_silent = 0.0;
  double eps_active = 0.0;
};

/// Standard Gaussian upper tail Q(x) = P(N(0,1) > x).
double normal_upper_tail(double x);

/// Inverse of the upper tail on (0, 1); |error| < 1e-8 over (1e-8, 1 - 1e-8).
double normal_upper_tail_inv(double p);

/// Arithmetic mean of the per-sample energies; throws on an empty slot.
double energy_statistic(std::span<const double> samples);

/// Busy iff statistic > threshold; a tie decides Idle.
SensingDecision decide(double statistic, double threshold);

// Central-limit model of the energy statistic over n exponential-energy
// samples with mean power P: approximately Normal(P, P^2 / n). The two tail
// probabilities below and the threshold inversion all follow from it.

/// P(statistic > threshold | channel power h0_power).
double analytic_false_alarm(double threshold, double h0_power, std::size_t n_samples);

/// P(statistic > threshold | channel power h1_power), occupied hypothesis.
double analytic_detection(double threshold, double h1_power, std::size_t n_samples);

/// Threshold achieving the target detection probability under h1_power:
/// h1_power * (1 + Qinv(pd_target) / sqrt(n)), clamped at 0.
double threshold_for_detection_target(double h1_power, std::size_t n_samples, double pd_target);

/// Activity-adaptive threshold pair meeting pd_target on both branches:
/// silent against noise + PU power, active against noise + PU power + RSI.
ThresholdPair make_threshold_pair(const RadioParams& params, const RsiModel& rsi,
                                  std::size_t n_samples, double pd_target);

}  // namespace latsim
