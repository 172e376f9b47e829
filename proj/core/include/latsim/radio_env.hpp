#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "latsim/rng.hpp"

namespace latsim {

enum class PuState : std::uint8_t { Busy, Idle };

/// Two-state per-slot Markov chain for the primary user's busy/idle process
/// (geometric holding times, transitions at slot boundaries only).
struct PuTrafficModel {
  double p_idle_to_busy = 0.05;
  double p_busy_to_idle = 0.05;

  void validate() const;  // throws ConfigError
};

/// Long-run busy fraction p01 / (p01 + p10); 0.5 by convention for the
/// frozen chain (both probabilities zero).
double stationary_busy_fraction(const PuTrafficModel& model);

enum class RsiFamily : std::uint8_t { Gaussian, Rayleigh, Rician };

/// Residual self-interference after cancelation. chi_sq is the linear power
/// ratio RSI power / transmit power; chi_sq = 0 means perfect cancelation.
/// The family controls the per-slot realization of the interference power;
/// all families share the expected-power contract chi_sq * tx_power.
struct RsiModel {
  double chi_sq = 0.01;
  RsiFamily family = RsiFamily::Gaussian;
  double rician_k = 1.0;  // K-factor, used by the Rician family only

  void validate() const;
};

struct RadioParams {
  double noise_power = 1.0;
  double pu_rx_power = 1.0;    // PU signal power at the SU sensing antenna
  double su_link_snr = 100.0;  // gamma_t of the SU1 -> SU2 data link, linear
  double link_gain = 1.0;      // gamma_t = link_gain * tx_power / noise_power
  double tx_power = 100.0;

  void validate() const;

  /// Copy with a new transmit power and su_link_snr rederived from link_gain.
  /// Power sweeps use this so the link rate tracks the swept power.
  RadioParams with_tx_power(double new_tx_power) const;
};

/// Advance the PU chain by one slot, consuming exactly one draw.
PuState step_pu_state(const PuTrafficModel& model, PuState current, RngStream& rng);

/// Initial PU state drawn from the stationary distribution (one draw).
PuState initial_pu_state(const PuTrafficModel& model, RngStream& rng);

/// Expected RSI power at the sensing antenna: chi_sq * tx_power.
double rsi_power(const RsiModel& model, double tx_power);

/// Per-slot RSI power realization. Gaussian: the expected power, no draw.
/// Rayleigh/Rician: block-fading self-interference channel redrawn each slot,
/// normalized so the slot average equals rsi_power().
double rsi_slot_power(const RsiModel& model, double tx_power, RngStream& rng);

/// Total expected received power at the sensing antenna for one slot.
double expected_rx_power(const RadioParams& params, PuState pu, bool su_transmitting,
                         const RsiModel& rsi);

/// n i.i.d. per-sample energies of circularly-symmetric complex Gaussian
/// samples with the given total power, i.e. Exp(power) energies.
void sample_energies(double power, std::size_t n, RngStream& rng, std::vector<double>& out);

/// Per-sample energies a sensing antenna observes during one slot.
std::vector<double> gen_slot_samples(const RadioParams& params, PuState pu, bool su_transmitting,
                                     const RsiModel& rsi, std::size_t n_samples, RngStream& rng);

}  // namespace latsim
