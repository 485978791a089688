#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "driftflow/particles.hpp"

namespace driftflow::testing {

// Small deterministic generator for randomized test instances; keeps the
// suite reproducible across platforms without dragging <random> semantics in.
struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }
};

// Random particle set with normalized positive weights and a minimum
// pairwise location separation (gradient checks need points clear of the
// xlog clamp region).
inline ParticleSet random_set(TestRng& rng, std::size_t count, std::size_t dim,
                              double min_separation = 0.05) {
  std::vector<double> locations;
  while (locations.size() < count * dim) {
    std::vector<double> candidate(dim);
    for (auto& v : candidate) v = rng.uniform(-2.0, 2.0);
    bool clear = true;
    for (std::size_t i = 0; i + dim <= locations.size(); i += dim) {
      double s = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = locations[i + d] - candidate[d];
        s += diff * diff;
      }
      if (std::sqrt(s) < min_separation) {
        clear = false;
        break;
      }
    }
    if (clear) locations.insert(locations.end(), candidate.begin(), candidate.end());
  }
  std::vector<double> weights(count);
  double total = 0.0;
  for (auto& w : weights) {
    w = 0.1 + rng.uniform();
    total += w;
  }
  for (auto& w : weights) w /= total;
  return ParticleSet(dim, std::move(weights), std::move(locations));
}

}  // namespace driftflow::testing
