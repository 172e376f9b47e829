#include "latsim/radio_env.hpp"

#include <cmath>
#include <sstream>

#include "latsim/errors.hpp"

namespace latsim {

namespace {

void require_probability(double v, const char* key) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream os;
    os << key << ": value " << v << " out of range [0, 1]";
    throw ConfigError(os.str());
  }
}

void require_finite_nonneg(double v, const char* key) {
  if (!(std::isfinite(v) && v >= 0.0)) {
    std::ostringstream os;
    os << key << ": value " << v << " must be finite and >= 0";
    throw ConfigError(os.str());
  }
}

}  // namespace

void PuTrafficModel::validate() const {
  require_probability(p_idle_to_busy, "p_idle_to_busy");
  require_probability(p_busy_to_idle, "p_busy_to_idle");
}

double stationary_busy_fraction(const PuTrafficModel& model) {
  const double sum = model.p_idle_to_busy + model.p_busy_to_idle;
  if (sum <= 0.0) return 0.5;
  return model.p_idle_to_busy / sum;
}

void RsiModel::validate() const {
  require_finite_nonneg(chi_sq, "chi_sq");
  require_finite_nonneg(rician_k, "rician_k");
}

void RadioParams::validate() const {
  if (!(std::isfinite(noise_power) && noise_power > 0.0)) {
    std::ostringstream os;
    os << "noise_power: value " << noise_power << " must be finite and > 0";
    throw ConfigError(os.str());
  }
  require_finite_nonneg(pu_rx_power, "pu_rx_power");
  require_finite_nonneg(su_link_snr, "su_link_snr");
  require_finite_nonneg(tx_power, "tx_power");
  if (!(std::isfinite(link_gain) && link_gain > 0.0)) {
    std::ostringstream os;
    os << "link_gain: value " << link_gain << " must be finite and > 0";
    throw ConfigError(os.str());
  }
}

RadioParams RadioParams::with_tx_power(double new_tx_power) const {
  RadioParams out = *this;
  out.tx_power = new_tx_power;
  out.su_link_snr = link_gain * new_tx_power / noise_power;
  return out;
}

PuState step_pu_state(const PuTrafficModel& model, PuState current, RngStream& rng) {
  const double p_leave =
      current == PuState::Busy ? model.p_busy_to_idle : model.p_idle_to_busy;
  const bool leave = rng.next_bernoulli(p_leave);
  if (!leave) return current;
  return current == PuState::Busy ? PuState::Idle : PuState::Busy;
}

PuState initial_pu_state(const PuTrafficModel& model, RngStream& rng) {
  return rng.next_bernoulli(stationary_busy_fraction(model)) ? PuState::Busy : PuState::Idle;
}

double rsi_power(const RsiModel& model, double tx_power) { return model.chi_sq * tx_power; }

double rsi_slot_power(const RsiModel& model, double tx_power, RngStream& rng) {
  const double mean = rsi_power(model, tx_power);
  switch (model.family) {
    case RsiFamily::Gaussian:
      return mean;
    case RsiFamily::Rayleigh:
      // |h|^2 of a Rayleigh-fading leakage channel, unit mean.
      return rng.next_exponential(mean);
    case RsiFamily::Rician: {
      // |los + scatter|^2 with K = rician_k, normalized to unit mean.
      const double k = model.rician_k;
      const double los = std::sqrt(k / (k + 1.0));
      const double sigma = std::sqrt(1.0 / (2.0 * (k + 1.0)));
      // Box-Muller for the two scatter components.
      const double u1 = 1.0 - rng.next_unit();
      const double u2 = rng.next_unit();
      const double r = std::sqrt(-2.0 * std::log(u1));
      const double gx = r * std::cos(6.283185307179586476925286766559 * u2);
      const double gy = r * std::sin(6.283185307179586476925286766559 * u2);
      const double re = los + sigma * gx;
      const double im = sigma * gy;
      return mean * (re * re + im * im);
    }
  }
  return mean;
}

double expected_rx_power(const RadioParams& params, PuState pu, bool su_transmitting,
                         const RsiModel& rsi) {
  double power = params.noise_power;
  if (pu == PuState::Busy) power += params.pu_rx_power;
  if (su_transmitting) power += rsi_power(rsi, params.tx_power);
  return power;
}

void sample_energies(double power, std::size_t n, RngStream& rng, std::vector<double>& out) {
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rng.next_exponential(power);
}

std::vector<double> gen_slot_samples(const RadioParams& params, PuState pu, bool su_transmitting,
                                     const RsiModel& rsi, std::size_t n_samples, RngStream& rng) {
  double power = params.noise_power;
  if (pu == PuState::Busy) power += params.pu_rx_power;
  if (su_transmitting) power += rsi_slot_power(rsi, params.tx_power, rng);
  std::vector<double> out;
  sample_energies(power, n_samples, rng, out);
  return out;
}

}  // namespace latsim
