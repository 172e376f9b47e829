#include <benchmark/benchmark.h>

#include <vector>

#include "latsim/analysis.hpp"
#include "latsim/radio_env.hpp"
#include "latsim/sensing.hpp"
#include "latsim/sim_engine.hpp"

using namespace latsim;

static void BM_SampleEnergies(benchmark::State& state) {
  RngStream rng(1, 1);
  std::vector<double> out;
  for (auto _ : state) {
    sample_energies(2.0, static_cast<std::size_t>(state.range(0)), rng, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleEnergies)->Arg(100)->Arg(1000);

static void BM_RunScenarioLat(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.n_slots = static_cast<std::uint64_t>(state.range(0));
  cfg.warmup_slots = 0;
  cfg.thin_trace = true;
  for (auto _ : state) {
    const Trace trace = run_scenario(cfg);
    benchmark::DoNotOptimize(trace.summary().counted_slots);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunScenarioLat)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_RunScenarioDsa(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.protocol.kind = ProtocolKind::Dsa;
  cfg.n_slots = static_cast<std::uint64_t>(state.range(0));
  cfg.warmup_slots = 0;
  cfg.thin_trace = true;
  for (auto _ : state) {
    const Trace trace = run_scenario(cfg);
    benchmark::DoNotOptimize(trace.summary().counted_slots);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunScenarioDsa)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ChainStationary(benchmark::State& state) {
  ScenarioConfig cfg;
  for (auto _ : state) {
    const ChainStationary chain = analytic_case_probabilities(cfg);
    benchmark::DoNotOptimize(chain.distribution[0]);
  }
}
BENCHMARK(BM_ChainStationary);

static void BM_TailInverse(benchmark::State& state) {
  double p = 0.0001;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_upper_tail_inv(p));
    p += 0.0001;
    if (p >= 1.0) p = 0.0001;
  }
}
BENCHMARK(BM_TailInverse);

BENCHMARK_MAIN();
