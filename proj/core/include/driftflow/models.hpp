#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "driftflow/particles.hpp"

namespace driftflow {

// A nonnegative, evaluable, temperable function of the state, stored as a
// log density up to an additive constant. Returns -infinity where the
// underlying function is zero.
class Likelihood {
public:
  using LogDensityFn = std::function<double(std::span<const double>)>;

  Likelihood(std::string descriptor, LogDensityFn log_eval);

  double log_eval(std::span<const double> x) const { return fn_(x); }
  double log_eval(double x) const { return fn_({&x, 1}); }
  const std::string& descriptor() const noexcept { return descriptor_; }

private:
  std::string descriptor_;
  LogDensityFn fn_;
};

struct GaussianSpec {
  double mean = 0.0;
  double std = 1.0;  // > 0
};

// log f(x) = -(y_hat - x)^2 / (2 sigma^2), the scalar measurement y = x + v.
Likelihood linear_likelihood(double y_hat, double noise_std);

// log f(x) = -(y_hat - x^3)^2 / (2 sigma^2), the cubic sensor y = x^3 + v.
Likelihood cubic_likelihood(double y_hat, double noise_std);

// log f(x) = -((x-1.2)(x-1.5)(x+1.2)(x+1.5))^2 / 2; two near-flat bumps over
// [-1.5,-1.2] and [1.2,1.5] with fast-decaying tails.
Likelihood quartic_likelihood();

// Inverse standard normal CDF (rational approximation, |rel err| < 1.2e-9).
double standard_normal_quantile(double p);

// L equal-weight particles at the midpoint quantiles
// mean + std * Phi^-1((i - 0.5) / L), ascending and exactly symmetric about
// the mean. Deterministic and bit-reproducible.
ParticleSet deterministic_gaussian_samples(const GaussianSpec& spec, std::size_t count);

// Standard particle filter step: one full-likelihood reweight followed by
// multinomial resampling with replacement. Output locations are a
// sub-multiset of the input locations. The generator is seeded and
// portable, so every platform reproduces the same draws per seed.
ParticleSet sir_baseline(const ParticleSet& prior, const Likelihood& lik, std::uint64_t seed);

}  // namespace driftflow
