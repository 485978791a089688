#include "driftflow/particles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "driftflow/models.hpp"

namespace driftflow {

namespace {

constexpr double kWeightSumTol = 1e-9;
constexpr double kWeightClamp = 1e-300;  // subnormal guard before normalization

void check_normalized(const std::vector<double>& weights, const char* where) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    throw std::invalid_argument(std::string(where) + ": weights are not normalized");
  }
}

}  // namespace

ParticleSet::ParticleSet(std::size_t dim, std::vector<double> weights,
                         std::vector<double> locations)
    : dim_(dim), weights_(std::move(weights)), locations_(std::move(locations)) {
  if (dim_ == 0) throw std::invalid_argument("ParticleSet: dim must be >= 1");
  if (weights_.empty()) throw std::invalid_argument("ParticleSet: at least one particle required");
  if (locations_.size() != weights_.size() * dim_) {
    throw std::invalid_argument("ParticleSet: locations size does not match count * dim");
  }
  for (double w : weights_) {
    if (!(w >= 0.0)) throw std::invalid_argument("ParticleSet: negative or NaN weight");
  }
  check_normalized(weights_, "ParticleSet");
}

ParticleSet make_equal_weight(std::size_t dim, std::vector<double> locations) {
  if (dim == 0) throw std::invalid_argument("make_equal_weight: dim must be >= 1");
  if (locations.empty() || locations.size() % dim != 0) {
    throw std::invalid_argument("make_equal_weight: locations empty or not a multiple of dim");
  }
  const std::size_t count = locations.size() / dim;
  std::vector<double> weights(count, 1.0 / static_cast<double>(count));
  return ParticleSet(dim, std::move(weights), std::move(locations));
}

ParticleSet make_equal_weight(std::vector<double> xs) {
  return make_equal_weight(1, std::move(xs));
}

ParticleSet bayes_reweight(const ParticleSet& set, const Likelihood& lik, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("bayes_reweight: gamma must lie in (0, 1]");
  }
  const std::size_t count = set.count();

  // log(w_i) + gamma * log f_L(x_i), max-subtracted before exponentiation.
  std::vector<double> log_w(count);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const double ll = lik.log_eval(set.location(i));
    if (std::isnan(ll)) throw std::runtime_error("bayes_reweight: likelihood evaluated to NaN");
    log_w[i] = std::log(set.weight(i)) + gamma * ll;
    max_log = std::max(max_log, log_w[i]);
  }
  if (!std::isfinite(max_log)) {
    throw std::runtime_error("bayes_reweight: total degeneration, all tempered weights vanish");
  }

  std::vector<double> weights(count);
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    double w = std::exp(log_w[i] - max_log);
    if (w < kWeightClamp) w = 0.0;
    weights[i] = w;
    total += w;
  }
  if (total <= 0.0) {
    throw std::runtime_error("bayes_reweight: total degeneration, all tempered weights vanish");
  }
  for (double& w : weights) w /= total;

  return ParticleSet(set.dim(), std::move(weights), set.locations());
}

double effective_sample_size(const ParticleSet& set) {
  check_normalized(set.weights(), "effective_sample_size");
  double sum_sq = 0.0;
  for (double w : set.weights()) sum_sq += w * w;
  return 1.0 / sum_sq;
}

std::vector<double> weighted_mean(const ParticleSet& set) {
  check_normalized(set.weights(), "weighted_mean");
  std::vector<double> mean(set.dim(), 0.0);
  for (std::size_t i = 0; i < set.count(); ++i) {
    const auto x = set.location(i);
    const double w = set.weight(i);
    for (std::size_t d = 0; d < set.dim(); ++d) mean[d] += w * x[d];
  }
  return mean;
}

void write_particle_csv(const ParticleSet& set, std::ostream& out) {
  out << "w";
  for (std::size_t d = 1; d <= set.dim(); ++d) out << ",x" << d;
  out << "\n";
  char buf[32];
  for (std::size_t i = 0; i < set.count(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", set.weight(i));
    out << buf;
    const auto x = set.location(i);
    for (std::size_t d = 0; d < set.dim(); ++d) {
      std::snprintf(buf, sizeof(buf), "%.17g", x[d]);
      out << "," << buf;
    }
    out << "\n";
  }
}

std::string particle_csv(const ParticleSet& set) {
  std::ostringstream out;
  write_particle_csv(set, out);
  return out.str();
}

ParticleSet read_particle_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("particle csv: empty input");
  std::size_t dim = 0;
  {
    std::stringstream header(line);
    std::string field;
    if (!std::getline(header, field, ',') || field != "w") {
      throw std::invalid_argument("particle csv: header must start with 'w'");
    }
    while (std::getline(header, field, ',')) ++dim;
    if (dim == 0) throw std::invalid_argument("particle csv: no coordinate columns");
  }

  std::vector<double> weights;
  std::vector<double> locations;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string field;
    std::size_t col = 0;
    while (std::getline(row, field, ',')) {
      const double v = std::strtod(field.c_str(), nullptr);
      if (col == 0) {
        weights.push_back(v);
      } else {
        locations.push_back(v);
      }
      ++col;
    }
    if (col != dim + 1) throw std::invalid_argument("particle csv: ragged row");
  }
  return ParticleSet(dim, std::move(weights), std::move(locations));
}

}  // namespace driftflow
