#include <benchmark/benchmark.h>

#include "matchmarket/evolve.hpp"
#include "matchmarket/stable.hpp"
#include "matchmarket/stats.hpp"

using namespace matchmarket;

static void BM_LazyEntryGaussian(benchmark::State& state) {
  RngStream rng(1);
  const auto a = build_affinity(static_cast<int>(state.range(0)),
                                DistributionSpec::gaussian(0, 1),
                                DistributionSpec::gaussian(0, 1), rng, AffinityStorage::Lazy);
  int i = 0, j = 1;
  const int n = a.n();
  for (auto _ : state) {
    benchmark::DoNotOptimize(a.at(i, j));
    j = (j + 7) % n;
    i = (i + 3) % n;
  }
}
BENCHMARK(BM_LazyEntryGaussian)->Arg(1000)->Arg(10000);

static void BM_DenseEntry(benchmark::State& state) {
  RngStream rng(1);
  const auto a = build_affinity(1000, DistributionSpec::gaussian(0, 1),
                                DistributionSpec::gaussian(0, 1), rng, AffinityStorage::Dense);
  int i = 0, j = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(a.at(i, j));
    j = (j + 7) % 1000;
    i = (i + 3) % 1000;
  }
}
BENCHMARK(BM_DenseEntry);

static void BM_DrawPairing(benchmark::State& state) {
  RngStream rng(2);
  std::vector<int> eligible(static_cast<std::size_t>(state.range(0)));
  for (std::size_t k = 0; k < eligible.size(); ++k) eligible[k] = static_cast<int>(k);
  for (auto _ : state) {
    benchmark::DoNotOptimize(draw_pairing(eligible, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DrawPairing)->Arg(1000)->Arg(10000);

static void BM_EvolveStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RngStream rng(3);
  const auto a = build_affinity(n, DistributionSpec::gaussian(0, 1),
                                DistributionSpec::gaussian(0, 1), rng, AffinityStorage::Lazy);
  PopulationState s = initial_state(a);
  RngStream pair_rng = rng.substream("pairing");
  for (auto _ : state) {
    const MatchPlan plan = draw_pairing(s.eligible_agents(), pair_rng);
    s = evolve_step(s, a, plan, MarriagePolicy::fixed(1.0));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EvolveStep)->Arg(1000)->Arg(10000);

static void BM_FullTrajectory(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    RngStream rng(seed++);
    const auto a = build_affinity(n, DistributionSpec::gaussian(0, 1),
                                  DistributionSpec::gaussian(0, 1), rng, AffinityStorage::Lazy);
    int last = 0;
    run_trajectory_observed(a, 100, MarriagePolicy::fixed(1.0), std::nullopt, rng,
                            [&](const PopulationState& st) { last = st.step; });
    benchmark::DoNotOptimize(last);
  }
}
BENCHMARK(BM_FullTrajectory)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_GaleShapley(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RngStream rng(5);
  const auto a = build_affinity(n, DistributionSpec::gaussian(0, 1),
                                DistributionSpec::gaussian(0, 1), rng);
  for (auto _ : state) {
    RngStream split_rng(7);
    const BipartiteInstance inst = random_equal_split(a, split_rng);
    benchmark::DoNotOptimize(gale_shapley(inst));
  }
}
BENCHMARK(BM_GaleShapley)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_SummarizeStep(benchmark::State& state) {
  RngStream rng(6);
  const auto a = build_affinity(10000, DistributionSpec::gaussian(0, 1),
                                DistributionSpec::gaussian(0, 1), rng, AffinityStorage::Lazy);
  const PopulationState s = initial_state(a);
  for (auto _ : state) {
    benchmark::DoNotOptimize(summarize_step(s, 4));
  }
}
BENCHMARK(BM_SummarizeStep);
