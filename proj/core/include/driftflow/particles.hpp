#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace driftflow {

class Likelihood;

// A Dirac mixture: L weighted point masses in R^D. Immutable after
// construction; all operations below return new sets.
class ParticleSet {
public:
  // weights.size() == L, locations.size() == L * dim (row-major, one point
  // per row). Throws std::invalid_argument on empty or inconsistent input,
  // negative weights, or a weight sum off from 1 by more than 1e-9.
  ParticleSet(std::size_t dim, std::vector<double> weights, std::vector<double> locations);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t count() const noexcept { return weights_.size(); }

  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> location(std::size_t i) const {
    return {locations_.data() + i * dim_, dim_};
  }

  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& locations() const noexcept { return locations_; }

private:
  std::size_t dim_;
  std::vector<double> weights_;
  std::vector<double> locations_;
};

// Equal weights 1/L over the given locations (row-major, order preserved).
ParticleSet make_equal_weight(std::size_t dim, std::vector<double> locations);

// 1-D convenience.
ParticleSet make_equal_weight(std::vector<double> xs);

// One tempered Bayes step: w_i <- w_i * f_L(x_i)^gamma, normalized.
// Locations are untouched. gamma must lie in (0, 1]. Evaluation happens in
// log space (max-subtracted) so narrow likelihoods do not underflow; weights
// below 1e-300 before normalization are clamped to zero. Throws
// std::runtime_error when every tempered weight vanishes (total degeneration).
ParticleSet bayes_reweight(const ParticleSet& set, const Likelihood& lik, double gamma);

// 1 / sum w_i^2, in [1, L]. Requires normalized weights.
double effective_sample_size(const ParticleSet& set);

// sum_i w_i * x_i, componentwise.
std::vector<double> weighted_mean(const ParticleSet& set);

// CSV with header "w,x1,...,xD", one row per particle, 17 significant digits.
void write_particle_csv(const ParticleSet& set, std::ostream& out);
std::string particle_csv(const ParticleSet& set);
ParticleSet read_particle_csv(std::istream& in);

}  // namespace driftflow
