#include "driftflow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace driftflow {

GaussianSpec kalman_posterior(const GaussianSpec& prior, double y_hat, double noise_std) {
  if (!(prior.std > 0.0) || !(noise_std > 0.0)) {
    throw std::invalid_argument("kalman_posterior: standard deviations must be positive");
  }
  const double vp = prior.std * prior.std;
  const double vv = noise_std * noise_std;
  const double mean = (vp * y_hat + vv * prior.mean) / (vp + vv);
  const double var = vp * vv / (vp + vv);
  return GaussianSpec{mean, std::sqrt(var)};
}

GridPosterior grid_posterior(const std::function<double(double)>& prior_logpdf,
                             const Likelihood& lik, double lo, double hi, std::size_t n) {
  if (!(lo < hi)) throw std::invalid_argument("grid_posterior: lo must be below hi");
  if (n < 1000) throw std::invalid_argument("grid_posterior: need at least 1000 grid points");

  GridPosterior gp;
  gp.grid.resize(n);
  gp.density.resize(n);
  gp.cdf.resize(n);

  const double step = (hi - lo) / static_cast<double>(n - 1);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double x = lo + step * static_cast<double>(k);
    gp.grid[k] = x;
    gp.density[k] = prior_logpdf(x) + lik.log_eval(x);
    max_log = std::max(max_log, gp.density[k]);
  }
  if (!std::isfinite(max_log)) {
    throw std::runtime_error("grid_posterior: posterior mass is zero on the grid");
  }
  for (double& v : gp.density) v = std::exp(v - max_log);

  // Trapezoid normalization, then the cumulative uses the same panel sums so
  // cdf.back() is exactly 1.
  double total = 0.0;
  gp.cdf[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    total += 0.5 * (gp.density[k - 1] + gp.density[k]) * (gp.grid[k] - gp.grid[k - 1]);
    gp.cdf[k] = total;
  }
  if (!(total > 0.0)) {
    throw std::runtime_error("grid_posterior: posterior mass is zero on the grid");
  }
  for (double& v : gp.density) v /= total;
  for (double& v : gp.cdf) v /= total;

  const double peak = *std::max_element(gp.density.begin(), gp.density.end());
  if (gp.density.front() > 1e-10 * peak || gp.density.back() > 1e-10 * peak) {
    throw std::runtime_error("grid_posterior: non-negligible mass at the grid endpoints");
  }
  return gp;
}

double quantile(const GridPosterior& gp, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile: p outside [0, 1]");
  if (p <= gp.cdf.front()) return gp.grid.front();
  if (p >= gp.cdf.back()) return gp.grid.back();
  const auto it = std::lower_bound(gp.cdf.begin(), gp.cdf.end(), p);
  const std::size_t k = static_cast<std::size_t>(it - gp.cdf.begin());
  const double c0 = gp.cdf[k - 1];
  const double c1 = gp.cdf[k];
  if (c1 <= c0) return gp.grid[k];
  const double t = (p - c0) / (c1 - c0);
  return gp.grid[k - 1] + t * (gp.grid[k] - gp.grid[k - 1]);
}

double grid_mean(const GridPosterior& gp) {
  double m = 0.0;
  for (std::size_t k = 1; k < gp.grid.size(); ++k) {
    const double h = gp.grid[k] - gp.grid[k - 1];
    m += 0.5 * h * (gp.grid[k - 1] * gp.density[k - 1] + gp.grid[k] * gp.density[k]);
  }
  return m;
}

double grid_std(const GridPosterior& gp) {
  const double m = grid_mean(gp);
  double var = 0.0;
  for (std::size_t k = 1; k < gp.grid.size(); ++k) {
    const double h = gp.grid[k] - gp.grid[k - 1];
    const double a = gp.grid[k - 1] - m;
    const double b = gp.grid[k] - m;
    var += 0.5 * h * (a * a * gp.density[k - 1] + b * b * gp.density[k]);
  }
  return std::sqrt(var);
}

double w1_particles_vs_grid(const ParticleSet& set, const GridPosterior& gp) {
  if (set.dim() != 1) throw std::invalid_argument("w1_particles_vs_grid: 1-D sets only");

  // Sorted (location, weight) pairs for the right-continuous empirical CDF.
  std::vector<std::size_t> order(set.count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return set.location(a)[0] < set.location(b)[0];
  });

  const std::size_t n = gp.grid.size();
  std::vector<double> emp(n);
  std::size_t next = 0;
  double mass = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = gp.grid[k];
    while (next < order.size() && set.location(order[next])[0] <= x) {
      mass += set.weight(order[next]);
      ++next;
    }
    emp[k] = mass;
  }

  double w1 = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double g0 = std::abs(emp[k - 1] - gp.cdf[k - 1]);
    const double g1 = std::abs(emp[k] - gp.cdf[k]);
    w1 += 0.5 * (g0 + g1) * (gp.grid[k] - gp.grid[k - 1]);
  }
  return w1;
}

void write_grid_csv(const GridPosterior& gp, std::ostream& out) {
  out << "x,pdf,cdf\n";
  char buf[96];
  for (std::size_t k = 0; k < gp.grid.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g", gp.grid[k], gp.density[k], gp.cdf[k]);
    out << buf << "\n";
  }
}

}  // namespace driftflow
