#include <benchmark/benchmark.h>

#include "fleetsup/dynamic_eval.hpp"
#include "fleetsup/ptp_solver.hpp"

using namespace fleetsup;

namespace {

StaticSnapshot random_instance(std::size_t n, Engine& rng) {
  const std::size_t m = n + 2;
  std::vector<double> rewards(m, 0.0), costs(m * m, 0.0);
  for (std::size_t i = 1; i <= n; ++i) rewards[i] = uniform(rng, 0, 20);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) costs[i * m + j] = uniform(rng, 1, 10);
    }
  }
  return StaticSnapshot(n, rewards, costs);
}

// Cycles through a pool of instances so one lucky graph does not dominate.
template <typename Solve>
void run_pool(benchmark::State& state, Solve solve) {
  Engine rng(7);
  std::vector<StaticSnapshot> pool;
  for (int k = 0; k < 32; ++k) pool.push_back(random_instance(static_cast<std::size_t>(state.range(0)), rng));
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(pool[k++ % pool.size()]));
  }
}

}  // namespace

static void BM_SolveBnb(benchmark::State& state) { run_pool(state, [](const auto& s) { return solve_bnb(s); }); }
BENCHMARK(BM_SolveBnb)->Arg(4)->Arg(6)->Arg(9)->Arg(12)->Arg(15)->Unit(benchmark::kMicrosecond);

static void BM_SolveDp(benchmark::State& state) { run_pool(state, [](const auto& s) { return solve_dp(s); }); }
BENCHMARK(BM_SolveDp)->Arg(4)->Arg(6)->Arg(9)->Arg(12)->Unit(benchmark::kMicrosecond);

static void BM_VerifyBound(benchmark::State& state) {
  Engine rng(11);
  const auto g = random_linear_instance(static_cast<std::size_t>(state.range(0)), 0.05, 0.05, 0.1, rng);
  const double dt = travel_time_bound(g);
  for (auto _ : state) benchmark::DoNotOptimize(check_bound(g, dt));
}
BENCHMARK(BM_VerifyBound)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMicrosecond);
