#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "driftflow/models.hpp"
#include "driftflow/particles.hpp"

namespace driftflow {

// A 1-D posterior tabulated on an ascending grid: trapezoid-normalized
// density and its cumulative.
struct GridPosterior {
  std::vector<double> grid;
  std::vector<double> density;
  std::vector<double> cdf;  // cdf.front() == 0, cdf.back() == 1
};

// Conjugate closed form for the scalar linear-Gaussian update:
//   mean = (sp^2 y + sv^2 m) / (sp^2 + sv^2),  var = sp^2 sv^2 / (sp^2 + sv^2).
GaussianSpec kalman_posterior(const GaussianSpec& prior, double y_hat, double noise_std);

// Quadrature posterior: exp(prior_logpdf + log likelihood), max-subtracted,
// trapezoid-normalized on n >= 1000 points of [lo, hi]. The caller must pick
// [lo, hi] wide enough; endpoint densities above 1e-10 of the peak are
// rejected.
GridPosterior grid_posterior(const std::function<double(double)>& prior_logpdf,
                             const Likelihood& lik, double lo, double hi, std::size_t n);

// Inverse CDF by linear interpolation; p in [0, 1].
double quantile(const GridPosterior& gp, double p);

// Trapezoid moments of the tabulated density.
double grid_mean(const GridPosterior& gp);
double grid_std(const GridPosterior& gp);

// Wasserstein-1 between a 1-D particle set and the tabulated law:
// the trapezoid integral of |F_particles - F_grid| over the grid, with
// F_particles the right-continuous weighted empirical CDF.
double w1_particles_vs_grid(const ParticleSet& set, const GridPosterior& gp);

// CSV with header "x,pdf,cdf".
void write_grid_csv(const GridPosterior& gp, std::ostream& out);

}  // namespace driftflow
