#include "driftflow/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace driftflow {

Likelihood::Likelihood(std::string descriptor, LogDensityFn log_eval)
    : descriptor_(std::move(descriptor)), fn_(std::move(log_eval)) {
  if (!fn_) throw std::invalid_argument("Likelihood: empty log density");
}

namespace {

void check_noise_std(double noise_std, const char* where) {
  if (!(noise_std > 0.0)) {
    throw std::invalid_argument(std::string(where) + ": noise_std must be positive");
  }
}

// splitmix64 (Steele, Lea & Flood, "Fast splittable pseudorandom number
// generators", OOPSLA 2014). Tiny, seedable, identical output on every
// platform; good enough for multinomial draws.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace

Likelihood linear_likelihood(double y_hat, double noise_std) {
  check_noise_std(noise_std, "linear_likelihood");
  const double inv_two_var = 1.0 / (2.0 * noise_std * noise_std);
  return Likelihood("linear(y=" + std::to_string(y_hat) + ")",
                    [y_hat, inv_two_var](std::span<const double> x) {
                      const double d = y_hat - x[0];
                      return -(d * d) * inv_two_var;
                    });
}

Likelihood cubic_likelihood(double y_hat, double noise_std) {
  check_noise_std(noise_std, "cubic_likelihood");
  const double inv_two_var = 1.0 / (2.0 * noise_std * noise_std);
  return Likelihood("cubic(y=" + std::to_string(y_hat) + ")",
                    [y_hat, inv_two_var](std::span<const double> x) {
                      const double d = y_hat - x[0] * x[0] * x[0];
                      return -(d * d) * inv_two_var;
                    });
}

Likelihood quartic_likelihood() {
  return Likelihood("quartic", [](std::span<const double> xs) {
    const double x = xs[0];
    const double p = (x - 1.2) * (x - 1.5) * (x + 1.2) * (x + 1.5);
    return -0.5 * p * p;
  });
}

double standard_normal_quantile(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("standard_normal_quantile: p outside [0, 1]");
  }
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();

  // Peter Acklam's rational approximation to the inverse normal CDF
  // (relative error below 1.15e-9 over the full open interval).
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

ParticleSet deterministic_gaussian_samples(const GaussianSpec& spec, std::size_t count) {
  if (count < 1) throw std::invalid_argument("deterministic_gaussian_samples: count must be >= 1");
  if (!(spec.std > 0.0)) {
    throw std::invalid_argument("deterministic_gaussian_samples: std must be positive");
  }
  // Midpoint quantiles; the upper half mirrors the lower so the grid is
  // exactly symmetric about the mean.
  std::vector<double> z(count, 0.0);
  for (std::size_t i = 0; i < count / 2; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    const double q = standard_normal_quantile(p);
    z[i] = q;
    z[count - 1 - i] = -q;
  }
  std::vector<double> xs(count);
  for (std::size_t i = 0; i < count; ++i) xs[i] = spec.mean + spec.std * z[i];
  return make_equal_weight(1, std::move(xs));
}

ParticleSet sir_baseline(const ParticleSet& prior, const Likelihood& lik, std::uint64_t seed) {
  const ParticleSet weighted = bayes_reweight(prior, lik, 1.0);
  const std::size_t count = weighted.count();
  const std::size_t dim = weighted.dim();

  std::vector<double> cumulative(count);
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    acc += weighted.weight(i);
    cumulative[i] = acc;
  }

  SplitMix64 rng(seed);
  std::vector<double> locations(count * dim);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = rng.uniform();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
    if (idx >= count) idx = count - 1;  // u can exceed a cumulative sum that rounds below 1
    const auto x = weighted.location(idx);
    std::copy(x.begin(), x.end(), locations.begin() + i * dim);
  }
  return make_equal_weight(dim, std::move(locations));
}

}  // namespace driftflow
