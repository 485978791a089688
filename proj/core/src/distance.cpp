#include "driftflow/distance.hpp"

#include <cmath>
#include <stdexcept>

namespace driftflow {

namespace {

thread_local std::uint64_t g_pair_count = 0;

void check_inputs(const ParticleSet& x_set, const ParticleSet& y_set, const CvmConfig& cfg) {
  if (x_set.dim() != y_set.dim()) {
    throw std::invalid_argument("cvm: particle sets have different dimensions");
  }
  if (!(cfg.mean_penalty_weight >= 0.0)) {
    throw std::invalid_argument("cvm: mean_penalty_weight must be nonnegative");
  }
  if (!(cfg.log_floor > 0.0)) {
    throw std::invalid_argument("cvm: log_floor must be positive");
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

// sum_i sum_j wA_i wB_j xlog(|a_i - b_j|^2), i-major; the single summation
// path shared by all three pairwise blocks keeps D(f, f) exactly zero.
double cross_term(const ParticleSet& a, const ParticleSet& b, double log_floor) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.count(); ++i) {
    const auto ai = a.location(i);
    const double wi = a.weight(i);
    double row = 0.0;
    for (std::size_t j = 0; j < b.count(); ++j) {
      ++g_pair_count;
      const double s = squared_distance(ai, b.location(j));
      if (s < log_floor) continue;
      row += b.weight(j) * (s * std::log(s));
    }
    total += wi * row;
  }
  return total;
}

double mean_penalty(const ParticleSet& x_set, const ParticleSet& y_set) {
  const auto mx = weighted_mean(x_set);
  const auto my = weighted_mean(y_set);
  double de = 0.0;
  for (std::size_t d = 0; d < mx.size(); ++d) {
    const double gap = mx[d] - my[d];
    de += gap * gap;
  }
  return de;
}

}  // namespace

double xlog(double z, double log_floor) {
  if (z < 0.0) throw std::domain_error("xlog: negative argument");
  if (log_floor <= 0.0) throw std::invalid_argument("xlog: log_floor must be positive");
  if (z < log_floor) return 0.0;
  return z * std::log(z);
}

double cvm_distance(const ParticleSet& x_set, const ParticleSet& y_set, const CvmConfig& cfg) {
  check_inputs(x_set, y_set, cfg);
  const double dyy = cfg.include_dyy ? cross_term(y_set, y_set, cfg.log_floor) : 0.0;
  const double dxy = cross_term(x_set, y_set, cfg.log_floor);
  const double dxx = cross_term(x_set, x_set, cfg.log_floor);
  const double de = mean_penalty(x_set, y_set);
  return dyy - 2.0 * dxy + dxx + cfg.mean_penalty_weight * de;
}

std::vector<double> cvm_gradient(const ParticleSet& x_set, const ParticleSet& y_set,
                                 const CvmConfig& cfg) {
  check_inputs(x_set, y_set, cfg);
  const std::size_t count = x_set.count();
  const std::size_t dim = x_set.dim();
  std::vector<double> grad(count * dim, 0.0);

  // d/dz xlog(z) = log(z) + 1; chain through the squared distances. Terms
  // below the floor are dropped, matching the clamped value.
  for (std::size_t i = 0; i < count; ++i) {
    const auto xi = x_set.location(i);
    const double wi = x_set.weight(i);
    double* gi = grad.data() + i * dim;

    // xx block: both orderings of each pair touch x_i.
    for (std::size_t j = 0; j < count; ++j) {
      ++g_pair_count;
      const auto xj = x_set.location(j);
      const double s = squared_distance(xi, xj);
      if (s < cfg.log_floor) continue;
      const double coeff = 4.0 * wi * x_set.weight(j) * (std::log(s) + 1.0);
      for (std::size_t d = 0; d < dim; ++d) gi[d] += coeff * (xi[d] - xj[d]);
    }

    // -2 * xy block.
    for (std::size_t j = 0; j < y_set.count(); ++j) {
      ++g_pair_count;
      const auto yj = y_set.location(j);
      const double s = squared_distance(xi, yj);
      if (s < cfg.log_floor) continue;
      const double coeff = -4.0 * wi * y_set.weight(j) * (std::log(s) + 1.0);
      for (std::size_t d = 0; d < dim; ++d) gi[d] += coeff * (xi[d] - yj[d]);
    }
  }

  if (cfg.mean_penalty_weight != 0.0) {
    const auto mx = weighted_mean(x_set);
    const auto my = weighted_mean(y_set);
    for (std::size_t i = 0; i < count; ++i) {
      const double wi = x_set.weight(i);
      double* gi = grad.data() + i * dim;
      for (std::size_t d = 0; d < dim; ++d) {
        gi[d] += 2.0 * cfg.mean_penalty_weight * (mx[d] - my[d]) * wi;
      }
    }
  }
  return grad;
}

std::uint64_t cvm_pair_count() noexcept { return g_pair_count; }
void cvm_pair_count_reset() noexcept { g_pair_count = 0; }

}  // namespace driftflow
