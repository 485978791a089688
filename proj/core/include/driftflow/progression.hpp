#pragma once

#include <string>
#include <vector>

#include "driftflow/distance.hpp"
#include "driftflow/models.hpp"
#include "driftflow/optimizer.hpp"
#include "driftflow/particles.hpp"
#include "driftflow/transport_map.hpp"

namespace driftflow {

struct ProgressionSettings {
  ProgressionSettings() { bfgs.max_iters = 2000; }

  double ess_floor = 0.5;    // minimum acceptable ESS/L per sub-step, in (0, 1]
  double min_dgamma = 1e-3;  // smallest sub-step exponent, in (0, 1]
  int max_substeps = 64;
  CvmConfig cvm{};           // include_dyy is forced off inside the map fit
  // The sub-step fits run with capped trial steps (see flow_update), which
  // trades the quasi-Newton endgame for basin safety; the larger iteration
  // budget buys the lost convergence back at microseconds per iteration.
  BfgsSettings bfgs;
  int rbf_count = 8;         // RBF centers per sub-step map, capped at L
};

struct SubstepRecord {
  double dgamma = 0.0;
  double ess_before_resample = 0.0;  // ESS of the reweighted set, pre-map
  double distance_initial = 0.0;     // objective at the identity map
  double distance_final = 0.0;
  int bfgs_iters = 0;
  bool converged = false;
  bool degeneration_warning = false;  // no dgamma >= min_dgamma kept ESS above the floor
  bool identity_fallback = false;     // fit aborted with no improvement; map left at identity
};

struct FlowReport {
  std::vector<SubstepRecord> substeps;
  double cumulative_gamma = 0.0;
  bool completed = false;              // cumulative gamma reached 1
  bool degeneration_warning = false;   // any sub-step warned
  bool max_substeps_exhausted = false;

  int substep_count() const noexcept { return static_cast<int>(substeps.size()); }
};

std::string flow_report_to_json(const FlowReport& report);

struct DgammaChoice {
  double dgamma = 0.0;
  bool degeneration_warning = false;
};

// Largest dgamma in [min_dgamma, 1 - gamma_done] keeping
// ESS(reweight(set, lik, dgamma)) / L >= ess_floor, found by 20 bisection
// steps; the full remainder is returned outright when it already satisfies
// the floor. When even min_dgamma violates the floor, min_dgamma is returned
// with the warning set.
DgammaChoice next_dgamma(const ParticleSet& set, const Likelihood& lik, double gamma_done,
                         const ProgressionSettings& settings);

struct FlowResult {
  ParticleSet posterior;  // equal weights
  MapChain chain;         // composes prior locations to posterior locations bit-exactly
  FlowReport report;
};

// The progressive Bayes update. Per sub-step: pick dgamma, reweight with the
// tempered likelihood, fit an identity-initialized RbfMap by minimizing the
// CvM distance between the equal-weight mapped set and the reweighted
// reference (D_yy dropped), then replace the current set with the equally
// weighted mapped one. Runs until the exponents sum to 1 or max_substeps is
// hit (partial result, flagged in the report).
FlowResult flow_update(const ParticleSet& prior, const Likelihood& lik,
                       const ProgressionSettings& settings);

}  // namespace driftflow
