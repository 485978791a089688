#include <benchmark/benchmark.h>

#include <vector>

#include "driftflow/distance.hpp"
#include "driftflow/particles.hpp"

using namespace driftflow;

namespace {

ParticleSet grid_set(std::size_t count, std::size_t dim, double offset) {
  std::vector<double> locations(count * dim);
  for (std::size_t i = 0; i < count * dim; ++i) {
    locations[i] = offset + 0.37 * static_cast<double>(i % 101) - 18.0;
  }
  return make_equal_weight(dim, std::move(locations));
}

}  // namespace

// The pairwise cost is quadratic in the particle count and linear in the
// dimension; the Range sweep makes the slopes visible in the output.
static void BM_CvmDistance(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  const ParticleSet x = grid_set(count, dim, 0.0);
  const ParticleSet y = grid_set(count, dim, 0.11);
  CvmConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cvm_distance(x, y, cfg));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CvmDistance)
    ->ArgsProduct({{16, 32, 64, 128, 256}, {1, 2, 3}})
    ->Complexity(benchmark::oNSquared);

static void BM_CvmGradient(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  const ParticleSet x = grid_set(count, 1, 0.0);
  const ParticleSet y = grid_set(count, 1, 0.11);
  CvmConfig cfg;
  cfg.include_dyy = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cvm_gradient(x, y, cfg));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CvmGradient)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNSquared);
