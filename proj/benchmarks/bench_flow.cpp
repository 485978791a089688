#include <benchmark/benchmark.h>

#include "driftflow/models.hpp"
#include "driftflow/progression.hpp"

using namespace driftflow;

static void BM_FlowLinear(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  const ParticleSet prior = deterministic_gaussian_samples({0.0, 1.0}, count);
  const Likelihood lik = linear_likelihood(1.0, 0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flow_update(prior, lik, ProgressionSettings{}));
  }
}
BENCHMARK(BM_FlowLinear)->Arg(10)->Arg(30)->Arg(50);

static void BM_FlowQuartic(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  const ParticleSet prior = deterministic_gaussian_samples({0.0, 1.0}, count);
  const Likelihood lik = quartic_likelihood();
  for (auto _ : state) {
    benchmark::DoNotOptimize(flow_update(prior, lik, ProgressionSettings{}));
  }
}
BENCHMARK(BM_FlowQuartic)->Arg(50);

static void BM_SirBaseline(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  const ParticleSet prior = deterministic_gaussian_samples({0.0, 1.0}, count);
  const Likelihood lik = quartic_likelihood();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sir_baseline(prior, lik, seed++));
  }
}
BENCHMARK(BM_SirBaseline)->RangeMultiplier(2)->Range(64, 1024);
