#include <benchmark/benchmark.h>

#include "fleetsup/experiment.hpp"

using namespace fleetsup;

static void BM_Trial(benchmark::State& state) {
  const ExperimentGrid grid;
  const auto type = kAllPolicies[state.range(0)];
  const auto cfg = cell_config(grid, FieldPattern::kCenterRidge, kLowAutonomy, kMidFleet);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_policy_trial(make_policy(type), cfg, seed++));
  state.SetLabel(std::string(policy_name(type)));
}
BENCHMARK(BM_Trial)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

static void BM_PtpDecision(benchmark::State& state) {
  const ExperimentGrid grid;
  auto cfg = cell_config(grid, FieldPattern::kUniformNoise, kLowAutonomy, fleet_by_name("large"));
  WorldState w(cfg, 3);
  const auto ptp = make_policy(PolicyType::kPTP);
  // Advance until several robots are waiting.
  while (!w.complete() && w.failed_robots().size() < 4) w.step(control_center_vertex(w.robot_count()));
  for (auto _ : state) benchmark::DoNotOptimize(decide(ptp, w));
  state.counters["failed"] = static_cast<double>(w.failed_robots().size());
}
BENCHMARK(BM_PtpDecision)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
