#include "latsim/sensing.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace latsim {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
constexpr double kSqrt2Pi = 2.50662827463100050241576528481104525;

// Rational approximation of the standard normal quantile (Acklam), refined
// with one Halley step against erfc. Accurate to ~1e-15 over (0, 1).
double normal_quantile(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement: e = Phi(x) - p.
  const double e = 0.5 * std::erfc(-x / kSqrt2) - p;
  const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace

double normal_upper_tail(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double normal_upper_tail_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream os;
    os << "normal_upper_tail_inv: probability " << p << " out of range (0, 1)";
    throw std::invalid_argument(os.str());
  }
  return -normal_quantile(p);
}

double energy_statistic(std::span<const double> samples) {
  if (samples.empty()) {
    throw std::invalid_argument("energy_statistic: empty slot, no samples to average");
  }
  double sum = 0.0;
  for (const double s : samples) sum += s;
  return sum / static_cast<double>(samples.size());
}

SensingDecision decide(double statistic, double threshold) {
  return statistic > threshold ? SensingDecision::Busy : SensingDecision::Idle;
}

namespace {

double tail_probability(double threshold, double power, std::size_t n_samples, const char* op) {
  if (!(power > 0.0)) {
    std::ostringstream os;
    os << op << ": channel power " << power << " must be > 0";
    throw std::invalid_argument(os.str());
  }
  if (n_samples < 1) {
    std::ostringstream os;
    os << op << ": n_samples must be >= 1";
    throw std::invalid_argument(os.str());
  }
  const double z = (threshold / power - 1.0) * std::sqrt(static_cast<double>(n_samples));
  return normal_upper_tail(z);
}

}  // namespace

double analytic_false_alarm(double threshold, double h0_power, std::size_t n_samples) {
  return tail_probability(threshold, h0_power, n_samples, "analytic_false_alarm");
}

double analytic_detection(double threshold, double h1_power, std::size_t n_samples) {
  return tail_probability(threshold, h1_power, n_samples, "analytic_detection");
}

double threshold_for_detection_target(double h1_power, std::size_t n_samples, double pd_target) {
  if (!(pd_target > 0.0 && pd_target < 1.0)) {
    std::ostringstream os;
    os << "pd_target: value " << pd_target << " out of range (0, 1)";
    throw std::invalid_argument(os.str());
  }
  if (!(h1_power > 0.0)) {
    std::ostringstream os;
    os << "threshold_for_detection_target: h1_power " << h1_power << " must be > 0";
    throw std::invalid_argument(os.str());
  }
  if (n_samples < 1) {
    throw std::invalid_argument("threshold_for_detection_target: n_samples must be >= 1");
  }
  const double q = normal_upper_tail_inv(pd_target);
  const double threshold = h1_power * (1.0 + q / std::sqrt(static_cast<double>(n_samples)));
  return threshold > 0.0 ? threshold : 0.0;
}

ThresholdPair make_threshold_pair(const RadioParams& params, const RsiModel& rsi,
                                  std::size_t n_samples, double pd_target) {
  const double h1_silent = params.noise_power + params.pu_rx_power;
  const double h1_active = h1_silent + rsi_power(rsi, params.tx_power);
  return ThresholdPair{
      threshold_for_detection_target(h1_silent, n_samples, pd_target),
      threshold_for_detection_target(h1_active, n_samples, pd_target),
  };
}

}  // namespace latsim
