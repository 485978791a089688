#include "driftflow/progression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

namespace driftflow {

namespace {

constexpr int kBisectionIters = 20;

bool ess_floor_holds(const ParticleSet& set, const Likelihood& lik, double dgamma,
                     double ess_floor) {
  try {
    const ParticleSet reweighted = bayes_reweight(set, lik, dgamma);
    const double ess = effective_sample_size(reweighted);
    return ess >= ess_floor * static_cast<double>(set.count());
  } catch (const std::runtime_error&) {
    return false;  // total degeneration at this exponent
  }
}

// Sub-step map geometry from the live cloud: centers at every ceil(L/R)-th
// particle sorted by first coordinate, one shared width equal to the median
// pairwise distance.
std::pair<std::vector<double>, std::vector<double>> rbf_geometry(const ParticleSet& set,
                                                                 int rbf_count) {
  const std::size_t count = set.count();
  const std::size_t dim = set.dim();
  const std::size_t r_target =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(rbf_count, 0)));

  std::vector<double> centers;
  if (r_target > 0) {
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return set.location(a)[0] < set.location(b)[0];
    });
    const std::size_t stride = (count + r_target - 1) / r_target;
    for (std::size_t i = 0; i < count; i += stride) {
      const auto x = set.location(order[i]);
      centers.insert(centers.end(), x.begin(), x.end());
    }
  }
  const std::size_t r_actual = centers.size() / dim;

  double width = 1.0;
  if (count > 1) {
    std::vector<double> dists;
    dists.reserve(count * (count - 1) / 2);
    for (std::size_t i = 0; i < count; ++i) {
      const auto xi = set.location(i);
      for (std::size_t j = i + 1; j < count; ++j) {
        const auto xj = set.location(j);
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
          const double diff = xi[d] - xj[d];
          s += diff * diff;
        }
        dists.push_back(std::sqrt(s));
      }
    }
    std::nth_element(dists.begin(), dists.begin() + dists.size() / 2, dists.end());
    const double median = dists[dists.size() / 2];
    if (median > 0.0) width = median;
  }
  return {std::move(centers), std::vector<double>(r_actual, width)};
}

void check_settings(const ProgressionSettings& settings) {
  if (!(settings.ess_floor > 0.0 && settings.ess_floor <= 1.0)) {
    throw std::invalid_argument("progression: ess_floor must lie in (0, 1]");
  }
  if (!(settings.min_dgamma > 0.0 && settings.min_dgamma <= 1.0)) {
    throw std::invalid_argument("progression: min_dgamma must lie in (0, 1]");
  }
  if (settings.max_substeps < 1) {
    throw std::invalid_argument("progression: max_substeps must be positive");
  }
}

}  // namespace

DgammaChoice next_dgamma(const ParticleSet& set, const Likelihood& lik, double gamma_done,
                         const ProgressionSettings& settings) {
  check_settings(settings);
  if (!(gamma_done >= 0.0 && gamma_done < 1.0)) {
    throw std::invalid_argument("next_dgamma: gamma_done must lie in [0, 1)");
  }
  const double remainder = 1.0 - gamma_done;
  const double floor = settings.ess_floor;

  if (ess_floor_holds(set, lik, remainder, floor)) return {remainder, false};
  if (remainder <= settings.min_dgamma) return {remainder, false};
  if (!ess_floor_holds(set, lik, settings.min_dgamma, floor)) {
    return {settings.min_dgamma, true};  // even the smallest step degenerates
  }

  double lo = settings.min_dgamma;  // feasible
  double hi = remainder;            // infeasible
  for (int it = 0; it < kBisectionIters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ess_floor_holds(set, lik, mid, floor)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, false};
}

FlowResult flow_update(const ParticleSet& prior, const Likelihood& lik,
                       const ProgressionSettings& settings) {
  check_settings(settings);
  const std::size_t count = prior.count();
  const std::size_t dim = prior.dim();
  const double equal = 1.0 / static_cast<double>(count);
  for (double w : prior.weights()) {
    if (std::abs(w - equal) > 1e-12) {
      throw std::invalid_argument("flow_update: prior must be equally weighted");
    }
  }

  CvmConfig fit_cfg = settings.cvm;
  fit_cfg.include_dyy = false;  // constant in the mapped locations

  ParticleSet current = prior;
  MapChain chain;
  FlowReport report;
  double gamma = 0.0;

  while (gamma < 1.0 - 1e-12) {
    if (report.substep_count() >= settings.max_substeps) {
      report.max_substeps_exhausted = true;
      break;
    }

    const DgammaChoice choice = next_dgamma(current, lik, gamma, settings);
    const ParticleSet reference = bayes_reweight(current, lik, choice.dgamma);

    SubstepRecord rec;
    rec.dgamma = choice.dgamma;
    rec.degeneration_warning = choice.degeneration_warning;
    rec.ess_before_resample = effective_sample_size(reference);

    auto [centers, widths] = rbf_geometry(current, settings.rbf_count);
    const double cloud_scale = widths.empty() ? 1.0 : widths.front();
    const RbfMap base = identity_map(dim, std::move(centers), std::move(widths));

    // The distance treats particle sets as unordered, so the mirrored
    // transport ties with the aligned one, and the xlog far field undercuts
    // both. Every basin switch needs either a climb through the
    // particle-crossing barrier (the monotone line search never accepts one)
    // or a single leap of at least the well separation, about one affine
    // unit. Capping trial steps well below that keeps the fit aligned with
    // its identity start.
    BfgsSettings bfgs = settings.bfgs;
    bfgs.max_step_norm = std::min(bfgs.max_step_norm, 0.35 * cloud_scale);

    // Candidate: equal weights at the mapped current locations. Reference:
    // the reweighted set at the unmapped locations.
    const std::vector<double>& cur_locs = current.locations();
    const Objective objective = [&](std::span<const double> params,
                                    std::span<double> grad_out) {
      const RbfMap m = base.with_params(params);
      std::vector<double> mapped = apply_map_batch(m, cur_locs);
      const ParticleSet candidate = make_equal_weight(dim, std::move(mapped));
      const double value = cvm_distance(candidate, reference, fit_cfg);
      const std::vector<double> loc_grad = cvm_gradient(candidate, reference, fit_cfg);
      const std::vector<double> param_grad =
          map_param_gradient(m, cur_locs, loc_grad);
      std::copy(param_grad.begin(), param_grad.end(), grad_out.begin());
      return value;
    };

    const std::vector<double> start = base.pack_params();
    {
      std::vector<double> scratch(start.size());
      rec.distance_initial = objective(start, scratch);
    }

    // Stage 1: affine part only (V pinned at zero). Flipping the affine
    // orientation would have to pass the collapsed-cloud barrier, so the fit
    // settles on the transport aligned with the identity start.
    const std::size_t affine_params = dim * dim + dim;
    std::vector<double> warm = start;
    int iters_used = 0;
    {
      const Objective affine_objective = [&](std::span<const double> params,
                                             std::span<double> grad_out) {
        std::vector<double> full = start;
        std::copy(params.begin(), params.end(), full.begin());
        std::vector<double> full_grad(full.size());
        const double value = objective(full, full_grad);
        std::copy(full_grad.begin(), full_grad.begin() + affine_params, grad_out.begin());
        return value;
      };
      BfgsSettings affine_bfgs = bfgs;
      affine_bfgs.max_iters = std::max(1, bfgs.max_iters / 4);
      const BfgsResult affine_fit = minimize(
          affine_objective, std::span<const double>(start.data(), affine_params), affine_bfgs);
      iters_used = affine_fit.iters;
      if (affine_fit.value < rec.distance_initial) {
        std::copy(affine_fit.argmin.begin(), affine_fit.argmin.end(), warm.begin());
      }
    }

    // Stage 2: all parameters, warm-started from the affine solution.
    BfgsSettings full_bfgs = bfgs;
    full_bfgs.max_iters = std::max(1, bfgs.max_iters - iters_used);
    const BfgsResult fit = minimize(objective, warm, full_bfgs);
    rec.bfgs_iters = iters_used + fit.iters;
    rec.converged = fit.converged;

    RbfMap fitted = base;
    if (fit.value < rec.distance_initial) {
      fitted = base.with_params(fit.argmin);
      rec.distance_final = fit.value;
    } else {
      // No improvement over the identity; keep it and surface the fact.
      rec.identity_fallback = fit.aborted;
      rec.distance_final = rec.distance_initial;
    }

    current = make_equal_weight(dim, apply_map_batch(fitted, cur_locs));
    chain.push_back(std::move(fitted));

    gamma += rec.dgamma;
    report.substeps.push_back(rec);
    if (rec.degeneration_warning) report.degeneration_warning = true;
  }

  report.cumulative_gamma = gamma;
  report.completed = gamma >= 1.0 - 1e-12;
  return FlowResult{std::move(current), std::move(chain), std::move(report)};
}

std::string flow_report_to_json(const FlowReport& report) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& rec : report.substeps) {
    steps.push_back({{"dgamma", rec.dgamma},
                     {"ess_before_resample", rec.ess_before_resample},
                     {"distance_initial", rec.distance_initial},
                     {"distance_final", rec.distance_final},
                     {"bfgs_iters", rec.bfgs_iters},
                     {"converged", rec.converged},
                     {"degeneration_warning", rec.degeneration_warning},
                     {"identity_fallback", rec.identity_fallback}});
  }
  nlohmann::json doc{{"substeps", steps},
                     {"K", report.substep_count()},
                     {"cumulative_gamma", report.cumulative_gamma},
                     {"completed", report.completed},
                     {"degeneration_warning", report.degeneration_warning},
                     {"max_substeps_exhausted", report.max_substeps_exhausted}};
  return doc.dump(2);
}

}  // namespace driftflow
