#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "latsim/metrics.hpp"
#include "latsim/sim_engine.hpp"

namespace latsim {

/// Probability of deciding Busy on each branch of the listen-and-talk
/// detector: under the idle/busy hypothesis, at the silent/active threshold.
struct LatDecisionProbs {
  double pf_silent = 0.0;  // P(decide Busy | PU idle,  node was silent)
  double pd_silent = 1.0;  // P(decide Busy | PU busy,  node was silent)
  double pf_active = 0.0;  // P(decide Busy | PU idle,  node was transmitting)
  double pd_active = 1.0;  // P(decide Busy | PU busy,  node was transmitting)
};

/// Decision probabilities implied by a scenario's thresholds and powers.
LatDecisionProbs lat_decision_probs(const ScenarioConfig& config);

/// State order of the joint (PU, SU action) chain:
/// 0 = (Busy, Silent), 1 = (Busy, Transmit), 2 = (Idle, Silent), 3 = (Idle, Transmit),
/// i.e. Case1, Case4, Case3, Case2.
using ChainMatrix = std::array<std::array<double, 4>, 4>;

/// Row-stochastic transition matrix of the joint chain. The next action
/// depends on the current (PU state, action) pair through the decision
/// probabilities; the PU transitions independently.
ChainMatrix lat_chain_matrix(const PuTrafficModel& traffic, const LatDecisionProbs& probs);

struct ChainStationary {
  bool ergodic = false;
  std::array<double, 4> distribution{};  // valid iff ergodic
  std::string structure_note;            // describes absorbing structure otherwise
  double residual = 0.0;                 // final l1 fixed-point residual
  std::uint32_t iterations = 0;
};

/// Stationary distribution by power iteration to l1 residual < 1e-12.
/// Degenerate chains report their absorbing structure instead.
ChainStationary lat_chain_stationary(const PuTrafficModel& traffic, const LatDecisionProbs& probs);

/// Stationary Case1..Case4 probabilities of a listen-and-talk scenario.
ChainStationary analytic_case_probabilities(const ScenarioConfig& config);

/// Closed-form metrics from the stationary chain (listen-and-talk only).
Metrics analytic_metrics(const ScenarioConfig& config);

/// rate(gamma_t) * (1 - analytic Pw).
double analytic_throughput(const ScenarioConfig& config);

/// n_points logarithmically spaced over [min_power, max_power].
std::vector<double> log_power_grid(double min_power, double max_power, std::size_t n_points);

struct SweepPoint {
  double tx_power = 0.0;
  std::optional<Metrics> simulated;
  std::optional<Metrics> analytic;
  std::string error;  // non-empty if this point failed
};

struct PowerSweepResult {
  double chi_sq = 0.0;
  std::vector<double> grid;
  std::vector<SweepPoint> points;
  std::optional<std::pair<double, double>> local_optimum;  // (power, analytic throughput)
};

/// Simulated and analytic metrics at each grid power. Every point runs with
/// the same master seed (common random numbers), so neighbouring points share
/// their noise and PU sample paths.
PowerSweepResult power_sweep(const ScenarioConfig& base, std::span<const double> grid,
                             unsigned threads = 1);

/// Indices of strict interior local maxima of a curve.
std::vector<std::size_t> interior_maxima(std::span<const double> values);

/// First interior grid point strictly above both neighbours; none if the
/// curve is monotone. Simulated curves are 3-point median filtered first to
/// suppress Monte Carlo spikes; analytic curves are scanned raw.
std::optional<std::pair<double, double>> find_local_optimum(std::span<const double> powers,
                                                            std::span<const double> values,
                                                            bool smooth_monte_carlo_noise);

/// Peak of the sweep's analytic throughput curve.
std::optional<std::pair<double, double>> find_local_optimum(const PowerSweepResult& result);

struct LbtTauPoint {
  double tau = 0.0;
  Metrics metrics;
};

struct CompareRow {
  double tx_power = 0.0;
  Metrics lat;
  std::vector<LbtTauPoint> lbt;
  std::size_t best_tau_index = 0;  // argmax of LBT throughput over the tau grid
};

/// Paired-seed comparison: listen-and-talk vs listen-before-talk with its
/// sensing fraction optimized by grid search, at every power in the grid.
std::vector<CompareRow> compare_lat_lbt(const ScenarioConfig& base,
                                        std::span<const double> power_grid,
                                        std::span<const double> tau_grid, unsigned threads = 1);

}  // namespace latsim
