#include <benchmark/benchmark.h>

#include "matchmarket/analytic.hpp"

using namespace matchmarket;
using namespace matchmarket::analytic;

// Exact rational coefficients roughly quadruple in bit length per step, so
// the cost wall sits near t ~ 8.
static void BM_MomentStepExact(benchmark::State& state) {
  const ModelSpec model = ModelSpec::uniform(0.0, 1.0);
  const int target = static_cast<int>(state.range(0));
  for (auto _ : state) {
    MomentState s = initial_moment_state(model, 4);
    for (int t = 0; t < target; ++t) s = moment_step(s, model, 4);
    benchmark::DoNotOptimize(to_double(s.b));
  }
}
BENCHMARK(BM_MomentStepExact)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_ReconstructDensity(benchmark::State& state) {
  const ModelSpec model = ModelSpec::uniform(0.0, 1.0);
  MomentState s = initial_moment_state(model, 8);
  s = moment_step(s, model, 8);
  s = moment_step(s, model, 8);
  const Interval support{Rational(-2), Rational(2)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(reconstruct_density(s.couple_moments, support, 2));
  }
}
BENCHMARK(BM_ReconstructDensity);

static void BM_FirstStepGaussian(benchmark::State& state) {
  const ModelSpec model = ModelSpec::gaussian(0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(first_step_moments(model, 4));
  }
}
BENCHMARK(BM_FirstStepGaussian)->Unit(benchmark::kMillisecond);

static void BM_StationaryMoment(benchmark::State& state) {
  const ModelSpec model = ModelSpec::uniform(0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stationary_moment(2, 1.0, model));
  }
}
BENCHMARK(BM_StationaryMoment);

static void BM_StationaryDensityMomentRegulated(benchmark::State& state) {
  const ModelSpec model = ModelSpec::uniform(0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stationary_density_moment(1, 1.0, model));
  }
}
BENCHMARK(BM_StationaryDensityMomentRegulated)->Unit(benchmark::kMillisecond);
