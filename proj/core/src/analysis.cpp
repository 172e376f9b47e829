#include "latsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "latsim/errors.hpp"
#include "latsim/sensing.hpp"
#include "parallel.hpp"

namespace latsim {

LatDecisionProbs lat_decision_probs(const ScenarioConfig& config) {
  const std::size_t n = config.n_samples_per_slot;
  const ThresholdPair thr =
      make_threshold_pair(config.radio, config.rsi, n, config.pd_target);
  const double noise = config.radio.noise_power;
  const double pu = config.radio.pu_rx_power;
  const double rsi = rsi_power(config.rsi, config.radio.tx_power);
  LatDecisionProbs p;
  p.pf_silent = analytic_false_alarm(thr.eps_silent, noise, n);
  p.pd_silent = analytic_detection(thr.eps_silent, noise + pu, n);
  p.pf_active = analytic_false_alarm(thr.eps_active, noise + rsi, n);
  p.pd_active = analytic_detection(thr.eps_active, noise + pu + rsi, n);
  return p;
}

ChainMatrix lat_chain_matrix(const PuTrafficModel& traffic, const LatDecisionProbs& probs) {
  // P(next action = Transmit | state): the node transmits next iff it
  // decided Idle on this slot's branch.
  const std::array<double, 4> p_transmit = {
      1.0 - probs.pd_silent,  // from (Busy, Silent)
      1.0 - probs.pd_active,  // from (Busy, Transmit)
      1.0 - probs.pf_silent,  // from (Idle, Silent)
      1.0 - probs.pf_active,  // from (Idle, Transmit)
  };
  const std::array<double, 4> p_busy_next = {
      1.0 - traffic.p_busy_to_idle,
      1.0 - traffic.p_busy_to_idle,
      traffic.p_idle_to_busy,
      traffic.p_idle_to_busy,
  };
  ChainMatrix m{};
  for (std::size_t i = 0; i < 4; ++i) {
    const double pb = p_busy_next[i];
    const double pt = p_transmit[i];
    m[i][0] = pb * (1.0 - pt);
    m[i][1] = pb * pt;
    m[i][2] = (1.0 - pb) * (1.0 - pt);
    m[i][3] = (1.0 - pb) * pt;
  }
  return m;
}

namespace {

// A 4-state chain is ergodic iff some power of its matrix is entrywise
// positive; by Wielandt's bound the 10th power settles it for n = 4.
bool is_primitive(const ChainMatrix& m) {
  ChainMatrix p = m;
  for (int step = 0; step < 4; ++step) {  // p = m^(2^k), up to m^16
    bool all_positive = true;
    for (const auto& row : p) {
      for (const double v : row) {
        if (!(v > 0.0)) {
          all_positive = false;
          break;
        }
      }
      if (!all_positive) break;
    }
    if (all_positive) return true;
    ChainMatrix sq{};
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < 4; ++k) acc += p[i][k] * p[k][j];
        sq[i][j] = acc;
      }
    }
    p = sq;
  }
  return false;
}

std::string describe_structure(const ChainMatrix& m) {
  static const char* names[4] = {"(Busy,Silent)", "(Busy,Transmit)", "(Idle,Silent)",
                                 "(Idle,Transmit)"};
  std::ostringstream os;
  os << "chain is not ergodic; self-loop weights:";
  for (std::size_t i = 0; i < 4; ++i) {
    os << ' ' << names[i] << "=" << m[i][i];
    if (m[i][i] >= 1.0) os << " (absorbing)";
  }
  return os.str();
}

}  // namespace

ChainStationary lat_chain_stationary(const PuTrafficModel& traffic,
                                     const LatDecisionProbs& probs) {
  const ChainMatrix m = lat_chain_matrix(traffic, probs);
  ChainStationary out;
  if (!is_primitive(m)) {
    out.ergodic = false;
    out.structure_note = describe_structure(m);
    return out;
  }
  std::array<double, 4> x = {0.25, 0.25, 0.25, 0.25};
  constexpr double kTol = 1e-13;  // comfortably under the 1e-12 contract
  constexpr std::uint32_t kMaxIter = 200000;
  double residual = 1.0;
  std::uint32_t it = 0;
  while (it < kMaxIter) {
    std::array<double, 4> y{};
    for (std::size_t j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < 4; ++i) acc += x[i] * m[i][j];
      y[j] = acc;
    }
    double norm = 0.0;
    for (const double v : y) norm += v;
    for (double& v : y) v /= norm;
    residual = 0.0;
    for (std::size_t j = 0; j < 4; ++j) residual += std::abs(y[j] - x[j]);
    x = y;
    ++it;
    if (residual < kTol) break;
  }
  out.ergodic = true;
  out.distribution = x;
  out.residual = residual;
  out.iterations = it;
  return out;
}

ChainStationary analytic_case_probabilities(const ScenarioConfig& config) {
  if (config.protocol.kind != ProtocolKind::Lat) {
    throw ConfigError("analytic_case_probabilities: closed form exists for the LAT protocol only");
  }
  config.validate();
  return lat_chain_stationary(config.traffic, lat_decision_probs(config));
}

Metrics analytic_metrics(const ScenarioConfig& config) {
  const ChainStationary chain = analytic_case_probabilities(config);
  if (!chain.ergodic) {
    throw UndefinedMetricError("analytic_metrics: " + chain.structure_note);
  }
  const LatDecisionProbs probs = lat_decision_probs(config);
  // Chain order is (B,S),(B,T),(I,S),(I,T) = Case1, Case4, Case3, Case2.
  const double c1 = chain.distribution[0];
  const double c4 = chain.distribution[1];
  const double c3 = chain.distribution[2];
  const double c2 = chain.distribution[3];
  Metrics m;
  m.collision_ratio = c4 / (c1 + c4);
  m.waste_ratio = c3 / (c2 + c3);
  m.rate = rate(config.radio.su_link_snr);
  m.throughput = throughput(m.rate, m.waste_ratio);
  m.false_alarm_rate = (c3 * probs.pf_silent + c2 * probs.pf_active) / (c2 + c3);
  m.missed_detection_rate =
      (c1 * (1.0 - probs.pd_silent) + c4 * (1.0 - probs.pd_active)) / (c1 + c4);
  // A collision run sits in (Busy,Transmit); it persists while the PU stays
  // busy and the node keeps missing it at the active threshold.
  const double stay = (1.0 - config.traffic.p_busy_to_idle) * (1.0 - probs.pd_active);
  m.mean_collision_duration = 1.0 / (1.0 - stay);
  m.case_fractions = {c1, c2, c3, c4};
  return m;
}

double analytic_throughput(const ScenarioConfig& config) {
  return analytic_metrics(config).throughput;
}

std::vector<double> log_power_grid(double min_power, double max_power, std::size_t n_points) {
  if (n_points < 1) throw ConfigError("grid_points: must be >= 1");
  if (!(min_power > 0.0) || !(max_power >= min_power)) {
    throw ConfigError("power grid: need 0 < tx_power_min <= tx_power_max");
  }
  std::vector<double> grid(n_points);
  if (n_points == 1) {
    grid[0] = min_power;
    return grid;
  }
  const double lmin = std::log10(min_power);
  const double lmax = std::log10(max_power);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n_points - 1);
    grid[i] = std::pow(10.0, lmin + f * (lmax - lmin));
  }
  return grid;
}

PowerSweepResult power_sweep(const ScenarioConfig& base, std::span<const double> grid,
                             unsigned threads) {
  if (grid.empty()) throw ConfigError("power grid: must not be empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ConfigError("power grid: values must be strictly increasing");
    }
  }
  PowerSweepResult result;
  result.chi_sq = base.rsi.chi_sq;
  result.grid.assign(grid.begin(), grid.end());
  result.points.resize(grid.size());
  detail::parallel_for(grid.size(), threads, [&](std::size_t i) {
    SweepPoint& point = result.points[i];
    point.tx_power = grid[i];
    try {
      ScenarioConfig cfg = base;
      cfg.radio = base.radio.with_tx_power(grid[i]);
      // Common random numbers: every point keeps the base seed.
      const Trace trace = run_scenario(cfg);
      point.simulated = compute_metrics(trace);
      if (cfg.protocol.kind == ProtocolKind::Lat) {
        point.analytic = analytic_metrics(cfg);
      }
    } catch (const std::exception& e) {
      point.error = e.what();
    }
  });
  result.local_optimum = find_local_optimum(result);
  return result;
}

std::vector<std::size_t> interior_maxima(std::span<const double> values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) out.push_back(i);
  }
  return out;
}

namespace {

std::vector<double> median3(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double a = v[i - 1];
    const double b = v[i];
    const double c = v[i + 1];
    out[i] = std::max(std::min(a, b), std::min(std::max(a, b), c));
  }
  return out;
}

}  // namespace

std::optional<std::pair<double, double>> find_local_optimum(std::span<const double> powers,
                                                            std::span<const double> values,
                                                            bool smooth_monte_carlo_noise) {
  if (powers.size() != values.size() || powers.size() < 3) return std::nullopt;
  std::vector<double> smoothed;
  std::span<const double> scan = values;
  if (smooth_monte_carlo_noise) {
    smoothed = median3(values);
    scan = smoothed;
  }
  const std::vector<std::size_t> peaks = interior_maxima(scan);
  if (peaks.empty()) return std::nullopt;
  const std::size_t i = peaks.front();
  return std::make_pair(powers[i], values[i]);
}

std::optional<std::pair<double, double>> find_local_optimum(const PowerSweepResult& result) {
  std::vector<double> analytic;
  analytic.reserve(result.points.size());
  for (const SweepPoint& p : result.points) {
    if (!p.analytic) return std::nullopt;
    analytic.push_back(p.analytic->throughput);
  }
  return find_local_optimum(result.grid, analytic, /*smooth_monte_carlo_noise=*/false);
}

std::vector<CompareRow> compare_lat_lbt(const ScenarioConfig& base,
                                        std::span<const double> power_grid,
                                        std::span<const double> tau_grid, unsigned threads) {
  if (power_grid.empty()) throw ConfigError("compare: power grid must not be empty");
  if (tau_grid.empty()) throw ConfigError("tau_list: must not be empty");
  for (const double tau : tau_grid) {
    if (!(tau > 0.0 && tau < 1.0)) {
      std::ostringstream os;
      os << "tau_list: value " << tau << " out of range (0, 1)";
      throw ConfigError(os.str());
    }
  }

  // One flat list of runs so sweep points and tau points parallelize evenly.
  const std::size_t per_row = 1 + tau_grid.size();
  std::vector<ScenarioConfig> configs;
  configs.reserve(power_grid.size() * per_row);
  for (const double power : power_grid) {
    ScenarioConfig lat = base;
    lat.radio = base.radio.with_tx_power(power);
    lat.protocol.kind = ProtocolKind::Lat;
    configs.push_back(lat);
    for (const double tau : tau_grid) {
      ScenarioConfig lbt = lat;  // same seed: paired sample paths
      lbt.protocol.kind = ProtocolKind::Lbt;
      lbt.protocol.lbt.sensing_fraction = tau;
      configs.push_back(lbt);
    }
  }
  const std::vector<RunOutcome> runs = run_many(configs, threads);

  std::vector<CompareRow> rows;
  rows.reserve(power_grid.size());
  for (std::size_t r = 0; r < power_grid.size(); ++r) {
    const std::size_t base_idx = r * per_row;
    for (std::size_t k = 0; k < per_row; ++k) {
      if (!runs[base_idx + k].trace) {
        throw UndefinedMetricError("compare: run failed: " + runs[base_idx + k].error);
      }
    }
    CompareRow row;
    row.tx_power = power_grid[r];
    row.lat = compute_metrics(*runs[base_idx].trace);
    row.lbt.reserve(tau_grid.size());
    for (std::size_t t = 0; t < tau_grid.size(); ++t) {
      row.lbt.push_back(LbtTauPoint{tau_grid[t], compute_metrics(*runs[base_idx + 1 + t].trace)});
    }
    row.best_tau_index = 0;
    for (std::size_t t = 1; t < row.lbt.size(); ++t) {
      if (row.lbt[t].metrics.throughput > row.lbt[row.best_tau_index].metrics.throughput) {
        row.best_tau_index = t;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace latsim
