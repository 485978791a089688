#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "driftflow/distance.hpp"
#include "driftflow/optimizer.hpp"
#include "test_helpers.hpp"

using namespace driftflow;

namespace {

// Central finite differences of cvm_distance over the locations of x_set.
std::vector<double> fd_gradient(const ParticleSet& x_set, const ParticleSet& y_set,
                                const CvmConfig& cfg, double h = 1e-6) {
  std::vector<double> grad(x_set.count() * x_set.dim());
  for (std::size_t k = 0; k < grad.size(); ++k) {
    std::vector<double> plus = x_set.locations();
    std::vector<double> minus = x_set.locations();
    plus[k] += h;
    minus[k] -= h;
    const ParticleSet xp(x_set.dim(), x_set.weights(), std::move(plus));
    const ParticleSet xm(x_set.dim(), x_set.weights(), std::move(minus));
    grad[k] = (cvm_distance(xp, y_set, cfg) - cvm_distance(xm, y_set, cfg)) / (2.0 * h);
  }
  return grad;
}

double max_rel_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 1e-8;
  for (double v : b) scale = std::max(scale, std::abs(v));
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap / scale;
}

ParticleSet permuted(const ParticleSet& set, testing::TestRng& rng) {
  std::vector<std::size_t> order(set.count());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  std::vector<double> weights(set.count());
  std::vector<double> locations(set.count() * set.dim());
  for (std::size_t i = 0; i < set.count(); ++i) {
    weights[i] = set.weight(order[i]);
    const auto x = set.location(order[i]);
    std::copy(x.begin(), x.end(), locations.begin() + i * set.dim());
  }
  return ParticleSet(set.dim(), std::move(weights), std::move(locations));
}

}  // namespace

TEST_CASE("xlog") {
  CHECK(xlog(1.0) == 0.0);
  CHECK(xlog(0.0) == 0.0);
  CHECK(xlog(4.0) == doctest::Approx(4.0 * std::log(4.0)).epsilon(1e-15));
  CHECK(xlog(4.0) == doctest::Approx(5.545177444479562).epsilon(1e-12));
  CHECK(xlog(0.5e-12) == 0.0);  // below the default floor
  CHECK_THROWS_AS(xlog(-1.0), std::domain_error);
}

TEST_CASE("cvm_distance identical sets give exactly zero") {
  testing::TestRng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 1 + rng.index(3);
    const ParticleSet set = testing::random_set(rng, 2 + rng.index(19), dim);
    for (double c : {0.0, 1.0, 10.0}) {
      CvmConfig cfg;
      cfg.mean_penalty_weight = c;
      CHECK(cvm_distance(set, set, cfg) == 0.0);
    }
  }
}

TEST_CASE("cvm_distance single-particle cases") {
  const ParticleSet at0 = make_equal_weight({0.0});
  const ParticleSet at1 = make_equal_weight({1.0});
  const ParticleSet at2 = make_equal_weight({2.0});

  CvmConfig cfg;
  cfg.mean_penalty_weight = 0.0;
  // All pairwise squared gaps are 0 or 1; xlog of both vanishes, so the
  // distance is blind to this pure translation.
  CHECK(cvm_distance(at0, at1, cfg) == 0.0);
  cfg.mean_penalty_weight = 1.0;
  CHECK(cvm_distance(at0, at1, cfg) == doctest::Approx(1.0).epsilon(1e-15));

  cfg.mean_penalty_weight = 0.0;
  CHECK(cvm_distance(at0, at2, cfg) ==
        doctest::Approx(-2.0 * xlog(4.0)).epsilon(1e-15));
  CHECK(cvm_distance(at0, at2, cfg) == doctest::Approx(-11.090354888959125).epsilon(1e-12));
}

TEST_CASE("cvm_distance is permutation invariant") {
  testing::TestRng rng(77);
  CvmConfig cfg;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t dim = 1 + rng.index(3);
    const ParticleSet x = testing::random_set(rng, 2 + rng.index(19), dim);
    const ParticleSet y = testing::random_set(rng, 2 + rng.index(19), dim);
    const double base = cvm_distance(x, y, cfg);
    CHECK(cvm_distance(permuted(x, rng), permuted(y, rng), cfg) ==
          doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("mean penalty vanishes when means agree") {
  // Same mean, different spread: c must not change the distance.
  const ParticleSet x = make_equal_weight({-1.0, 1.0});
  const ParticleSet y = make_equal_weight({-2.0, 2.0});
  CvmConfig c0;
  c0.mean_penalty_weight = 0.0;
  CvmConfig c10;
  c10.mean_penalty_weight = 10.0;
  CHECK(cvm_distance(x, y, c0) == doctest::Approx(cvm_distance(x, y, c10)).epsilon(1e-15));
}

TEST_CASE("dimension mismatch is rejected") {
  const ParticleSet x = make_equal_weight({0.0, 1.0});
  const ParticleSet y = make_equal_weight(2, {0.0, 0.0, 1.0, 1.0});
  CvmConfig cfg;
  CHECK_THROWS_AS(cvm_distance(x, y, cfg), std::invalid_argument);
  CHECK_THROWS_AS(cvm_gradient(x, y, cfg), std::invalid_argument);
}

TEST_CASE("cvm_gradient vanishes at a symmetric minimum") {
  const ParticleSet set = make_equal_weight({-1.0, 1.0});
  CvmConfig cfg;
  cfg.mean_penalty_weight = 0.0;
  const auto grad = cvm_gradient(set, set, cfg);
  CHECK(grad[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(grad[1] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("cvm_gradient matches central finite differences") {
  testing::TestRng rng(2024);
  CvmConfig cfg;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + rng.index(3);
    const std::size_t count = 2 + rng.index(9);
    const ParticleSet x = testing::random_set(rng, count, dim);
    const ParticleSet y = testing::random_set(rng, count, dim);
    cfg.mean_penalty_weight = (trial % 3 == 0) ? 0.0 : 10.0;
    cfg.include_dyy = trial % 2 == 0;
    const auto analytic = cvm_gradient(x, y, cfg);
    const auto numeric = fd_gradient(x, y, cfg);
    CHECK(max_rel_gap(analytic, numeric) < 1e-5);
  }
}

TEST_CASE("single particle pair gradient matches finite differences") {
  const ParticleSet x = make_equal_weight({0.0});
  const ParticleSet y = make_equal_weight({2.0});
  CvmConfig cfg;
  cfg.mean_penalty_weight = 1.0;
  const auto analytic = cvm_gradient(x, y, cfg);
  const auto numeric = fd_gradient(x, y, cfg);
  CHECK(analytic[0] == doctest::Approx(numeric[0]).epsilon(1e-7));
}

TEST_CASE("dropping the yy block shifts the value by a constant only") {
  testing::TestRng rng(31);
  const ParticleSet y = testing::random_set(rng, 8, 1);
  CvmConfig with;
  CvmConfig without;
  without.include_dyy = false;
  const ParticleSet x1 = testing::random_set(rng, 6, 1);
  const ParticleSet x2 = testing::random_set(rng, 6, 1);
  const double shift1 = cvm_distance(x1, y, with) - cvm_distance(x1, y, without);
  const double shift2 = cvm_distance(x2, y, with) - cvm_distance(x2, y, without);
  CHECK(shift1 == doctest::Approx(shift2).epsilon(1e-12));
  // And the gradient is untouched.
  const auto g1 = cvm_gradient(x1, y, with);
  const auto g2 = cvm_gradient(x1, y, without);
  for (std::size_t i = 0; i < g1.size(); ++i) CHECK(g1[i] == g2[i]);
}

TEST_CASE("optimizing with and without the yy block finds the same argmin") {
  testing::TestRng rng(12);
  const ParticleSet y = testing::random_set(rng, 6, 1);
  const ParticleSet x0 = testing::random_set(rng, 6, 1);

  const auto fit = [&](bool include_dyy) {
    CvmConfig cfg;
    cfg.include_dyy = include_dyy;
    const Objective obj = [&](std::span<const double> params, std::span<double> grad_out) {
      const ParticleSet x(1, x0.weights(), {params.begin(), params.end()});
      const auto g = cvm_gradient(x, y, cfg);
      std::copy(g.begin(), g.end(), grad_out.begin());
      return cvm_distance(x, y, cfg);
    };
    BfgsSettings settings;
    settings.max_step_norm = 0.5;
    return minimize(obj, x0.locations(), settings);
  };

  const auto with = fit(true);
  const auto without = fit(false);
  REQUIRE(with.converged);
  REQUIRE(without.converged);
  for (std::size_t i = 0; i < with.argmin.size(); ++i) {
    CHECK(with.argmin[i] == doctest::Approx(without.argmin[i]).epsilon(1e-8));
  }
}

TEST_CASE("pairwise work grows quadratically in the particle count") {
  testing::TestRng rng(9);
  CvmConfig cfg;
  const auto pairs_for = [&](std::size_t count) {
    const ParticleSet x = testing::random_set(rng, count, 2);
    const ParticleSet y = testing::random_set(rng, count, 2);
    cvm_pair_count_reset();
    cvm_distance(x, y, cfg);
    const std::uint64_t value_pairs = cvm_pair_count();
    cvm_pair_count_reset();
    cvm_gradient(x, y, cfg);
    const std::uint64_t grad_pairs = cvm_pair_count();
    return std::pair{value_pairs, grad_pairs};
  };

  const auto [v8, g8] = pairs_for(8);
  const auto [v16, g16] = pairs_for(16);
  const auto [v32, g32] = pairs_for(32);
  // Three blocks of L*M terms for the value, two for the gradient.
  CHECK(v8 == 3 * 8 * 8);
  CHECK(g8 == 2 * 8 * 8);
  CHECK(v16 == 4 * v8);
  CHECK(v32 == 4 * v16);
  CHECK(g16 == 4 * g8);
  CHECK(g32 == 4 * g16);
}
