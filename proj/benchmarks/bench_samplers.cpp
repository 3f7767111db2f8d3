#include <benchmark/benchmark.h>

#include "gnm/groups.hpp"
#include "gnm/rng.hpp"
#include "gnm/samplers.hpp"

namespace {

gnm::ModelConfig config(std::uint32_t k, std::vector<std::vector<double>> rows = {{0.9, 0.7}, {0.5, 0.3}}) {
  gnm::ModelConfig cfg;
  cfg.theta = gnm::ThetaMatrix::from_rows(rows);
  cfg.big_k = k;
  cfg.ell = 2;
  return cfg;
}

void run_strategy(benchmark::State& state, gnm::Strategy strategy) {
  const auto cfg = config(static_cast<std::uint32_t>(state.range(0)));
  std::uint64_t seed = 0;
  std::uint64_t examined = 0;
  for (auto _ : state) {
    const auto result = gnm::sample(strategy, cfg, seed++);
    examined += result.trace.total_examined();
    benchmark::DoNotOptimize(result.network.edges.data());
  }
  state.counters["examined"] = benchmark::Counter(static_cast<double>(examined), benchmark::Counter::kAvgIterations);
}

void BM_Ci(benchmark::State& state) { run_strategy(state, gnm::Strategy::kCi); }
void BM_Dcsd(benchmark::State& state) { run_strategy(state, gnm::Strategy::kDcsd); }
void BM_Gp(benchmark::State& state) { run_strategy(state, gnm::Strategy::kGp); }
void BM_KpgmGp(benchmark::State& state) { run_strategy(state, gnm::Strategy::kKpgmGp); }

BENCHMARK(BM_Ci)->DenseRange(4, 12, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Dcsd)->DenseRange(4, 16, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gp)->DenseRange(4, 16, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KpgmGp)->DenseRange(4, 12, 2)->Unit(benchmark::kMillisecond);

void BM_Binomial(benchmark::State& state) {
  gnm::Rng rng(1);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gnm::binomial_draw(n, 0.3, rng));
}
BENCHMARK(BM_Binomial)->Arg(20)->Arg(1000)->Arg(1 << 30);

void BM_KpgmGroups(benchmark::State& state) {
  const auto cfg = config(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gnm::kpgm_groups(cfg).groups.size());
}
BENCHMARK(BM_KpgmGroups)->Arg(8)->Arg(16)->Arg(24);

}  // namespace

BENCHMARK_MAIN();
