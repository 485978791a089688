#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "driftflow/oracle.hpp"
#include "driftflow/progression.hpp"

namespace driftflow {

struct ExperimentConfig {
  std::size_t particle_count = 30;  // L >= 2
  double y_hat = 1.0;
  double noise_std = 1.0;
  double ess_floor = 0.5;
  double mean_penalty = 10.0;       // CvM c
  int rbf_count = 8;
  double grad_tol = 1e-6;
  int max_bfgs_iters = 2000;
  int max_substeps = 64;
  std::uint64_t seed = 1;           // SIR baseline only
  std::string output_dir = ".";

  ProgressionSettings progression() const;
};

// A named threshold with its outcome; pass() below folds them.
struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double bound = 0.0;
};

bool all_passed(const std::vector<Check>& checks);

struct LinearRunSummary {
  double posterior_mean = 0.0;
  double posterior_std = 0.0;
  double kalman_mean = 0.0;
  double kalman_std = 0.0;
  double w1 = 0.0;
  double map_sup_norm = 0.0;  // vs the affine conjugate map, central 90% of the prior
  FlowReport report;
  std::vector<Check> checks;
  ParticleSet posterior = make_equal_weight({0.0});
};

struct CubicRunSummary {
  double posterior_mean = 0.0;
  double w1 = 0.0;
  double w1_quantile_baseline = 0.0;  // L midpoint quantiles of the oracle itself
  double map_sup_norm = 0.0;          // vs the oracle quantile-transport map
  FlowReport report;
  std::vector<Check> checks;
  ParticleSet posterior = make_equal_weight({0.0});
};

struct SirSweepEntry {
  std::size_t particle_count = 0;
  std::vector<double> w1_runs;  // one value per seeded run, run order
  double median_w1 = 0.0;
  double std_w1 = 0.0;
};

struct QuarticCompareSummary {
  double flow_w1 = 0.0;
  double flow_w1_repeat = 0.0;  // second run; must match bit-exactly
  std::vector<SirSweepEntry> sir;
  FlowReport report;
  std::vector<Check> checks;
  ParticleSet posterior = make_equal_weight({0.0});
};

struct CustomRunSummary {
  double posterior_mean = 0.0;
  double posterior_std = 0.0;
  double w1 = 0.0;
  double map_sup_norm = 0.0;
  FlowReport report;
  std::vector<Check> checks;  // empty: no pinned thresholds for user input
  ParticleSet posterior = make_equal_weight({0.0});
};

// Each runner writes prior.csv, posterior.csv, oracle.csv, map.json,
// map_curve.csv, report.json, summary.json and plot_*.svg into
// config.output_dir (created if missing), then returns the metrics it
// reported. run_cubic adds flow_trajectory.csv; run_quartic_compare adds
// sir_runs.csv. Execution failures throw; threshold failures only show up
// in the returned checks.
LinearRunSummary run_linear(const ExperimentConfig& config);
CubicRunSummary run_cubic(const ExperimentConfig& config);
QuarticCompareSummary run_quartic_compare(const ExperimentConfig& config);
CustomRunSummary run_custom(const ExperimentConfig& config, const std::string& expression);

}  // namespace driftflow
