#include "driftflow/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "driftflow/expression.hpp"
#include "driftflow/svg_plot.hpp"

namespace driftflow {

namespace {

constexpr std::size_t kGridPoints = 4001;
constexpr double kGridHalfWidthSigmas = 8.0;
constexpr int kMapCurvePoints = 241;
constexpr int kSupNormPoints = 361;
constexpr double kCentral90 = 1.6448536269514722;  // Phi^-1(0.95)

constexpr double kLinearMeanTol = 0.1;
constexpr double kLinearStdTol = 0.15;
constexpr double kLinearStdTolSmallL = 0.25;  // L <= 10
constexpr double kLinearMapSupTol = 0.05;
constexpr double kLinearMapSupTolSmallL = 0.1;  // finite prior resolution at small L
constexpr double kCubicW1Factor = 2.0;
constexpr double kCubicMapSupTol = 0.1;

const GaussianSpec kPrior{0.0, 1.0};  // the shipped experiments share N(0, 1)

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double standard_normal_logpdf(double x) {
  return -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi);
}

double particle_std(const ParticleSet& set) {
  const double mean = weighted_mean(set)[0];
  double var = 0.0;
  for (std::size_t i = 0; i < set.count(); ++i) {
    const double d = set.location(i)[0] - mean;
    var += set.weight(i) * d * d;
  }
  return std::sqrt(var);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  open_output(path) << text;
}

struct MapCurve {
  std::vector<double> x;
  std::vector<double> mapped;
  std::vector<double> reference;
};

MapCurve sample_map_curve(const MapChain& chain, const std::function<double(double)>& reference,
                          double lo, double hi, int n) {
  MapCurve curve;
  curve.x.resize(n);
  curve.mapped.resize(n);
  curve.reference.resize(n);
  for (int k = 0; k < n; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / (n - 1);
    curve.x[k] = x;
    curve.mapped[k] = compose(chain, {&x, 1})[0];
    curve.reference[k] = reference(x);
  }
  return curve;
}

double map_sup_norm(const MapChain& chain, const std::function<double(double)>& reference,
                    double lo, double hi, int n) {
  double sup = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / (n - 1);
    const double m = compose(chain, {&x, 1})[0];
    sup = std::max(sup, std::abs(m - reference(x)));
  }
  return sup;
}

void write_map_curve_csv(const std::filesystem::path& path, const MapCurve& curve) {
  auto out = open_output(path);
  out << "x,map,reference\n";
  char buf[96];
  for (std::size_t k = 0; k < curve.x.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g", curve.x[k], curve.mapped[k],
                  curve.reference[k]);
    out << buf << "\n";
  }
}

nlohmann::json checks_to_json(const std::vector<Check>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back(
        {{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"bound", c.bound}});
  }
  return arr;
}

std::vector<double> stem_heights(std::size_t count, double height) {
  return std::vector<double>(count, height);
}

std::vector<double> particle_positions(const ParticleSet& set) {
  std::vector<double> xs(set.count());
  for (std::size_t i = 0; i < set.count(); ++i) xs[i] = set.location(i)[0];
  return xs;
}

void plot_posterior(const std::filesystem::path& path, const std::string& title,
                    const GridPosterior& gp, const ParticleSet& prior,
                    const ParticleSet& posterior) {
  const double peak = *std::max_element(gp.density.begin(), gp.density.end());
  SvgPlot plot(title, "x", "density");
  plot.add_line(gp.grid, gp.density, "#1f5fbf", 1.8);
  const auto prior_x = particle_positions(prior);
  const auto post_x = particle_positions(posterior);
  plot.add_stems(prior_x, stem_heights(prior_x.size(), 0.25 * peak), "#b0b0b0", 1.0);
  plot.add_stems(post_x, stem_heights(post_x.size(), 0.5 * peak), "#0e9e9e", 1.4);
  plot.add_legend("oracle posterior", "#1f5fbf");
  plot.add_legend("prior particles", "#b0b0b0");
  plot.add_legend("flow particles", "#0e9e9e");
  plot.write_file(path.string());
}

void plot_map(const std::filesystem::path& path, const std::string& title,
              const MapCurve& curve) {
  SvgPlot plot(title, "prior x", "mapped x");
  plot.add_line(curve.x, curve.x, "#999999", 1.0, true);
  plot.add_line(curve.x, curve.reference, "#2e8b2e", 2.0);
  plot.add_line(curve.x, curve.mapped, "#c23b3b", 1.6);
  plot.add_legend("identity", "#999999");
  plot.add_legend("reference map", "#2e8b2e");
  plot.add_legend("composed flow map", "#c23b3b");
  plot.write_file(path.string());
}

// Positions of every particle after each sub-step, prefix-composed from the
// prior (step 0 = prior itself). Matches the internal flow states bit-exactly.
std::vector<std::vector<double>> trajectory_states(const ParticleSet& prior,
                                                   const FlowResult& flow) {
  std::vector<std::vector<double>> states;
  states.push_back(prior.locations());
  std::vector<double> cur = prior.locations();
  for (std::size_t k = 0; k < flow.chain.size(); ++k) {
    cur = apply_map_batch(flow.chain[k], cur);
    states.push_back(cur);
  }
  return states;
}

ProgressionSettings settings_from(const ExperimentConfig& config) {
  ProgressionSettings s;
  s.ess_floor = config.ess_floor;
  s.max_substeps = config.max_substeps;
  s.cvm.mean_penalty_weight = config.mean_penalty;
  s.bfgs.grad_tol = config.grad_tol;
  s.bfgs.max_iters = config.max_bfgs_iters;
  s.rbf_count = config.rbf_count;
  return s;
}

struct CommonRunArtifacts {
  ParticleSet prior;
  FlowResult flow;
  GridPosterior gp;
  double w1 = 0.0;
};

CommonRunArtifacts run_flow_against_grid(const ExperimentConfig& config, const Likelihood& lik) {
  const ParticleSet prior = deterministic_gaussian_samples(kPrior, config.particle_count);
  FlowResult flow = flow_update(prior, lik, settings_from(config));
  GridPosterior gp =
      grid_posterior(standard_normal_logpdf, lik, kPrior.mean - kGridHalfWidthSigmas * kPrior.std,
                     kPrior.mean + kGridHalfWidthSigmas * kPrior.std, kGridPoints);
  const double w1 = w1_particles_vs_grid(flow.posterior, gp);
  return CommonRunArtifacts{prior, std::move(flow), std::move(gp), w1};
}

void write_common_outputs(const std::filesystem::path& dir, const CommonRunArtifacts& run,
                          const MapCurve& curve, const std::string& title) {
  {
    auto out = open_output(dir / "prior.csv");
    write_particle_csv(run.prior, out);
  }
  {
    auto out = open_output(dir / "posterior.csv");
    write_particle_csv(run.flow.posterior, out);
  }
  {
    auto out = open_output(dir / "oracle.csv");
    write_grid_csv(run.gp, out);
  }
  write_text(dir / "map.json", map_chain_to_json(run.flow.chain));
  write_map_curve_csv(dir / "map_curve.csv", curve);
  write_text(dir / "report.json", flow_report_to_json(run.flow.report));
  plot_posterior(dir / "plot_posterior.svg", title + ": posterior", run.gp, run.prior,
                 run.flow.posterior);
  plot_map(dir / "plot_map.svg", title + ": composed map", curve);
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  return {{"L", config.particle_count},
          {"y_hat", config.y_hat},
          {"noise_std", config.noise_std},
          {"ess_floor", config.ess_floor},
          {"c", config.mean_penalty},
          {"rbf_count", config.rbf_count},
          {"grad_tol", config.grad_tol},
          {"max_bfgs_iters", config.max_bfgs_iters},
          {"max_substeps", config.max_substeps},
          {"seed", config.seed}};
}

void validate(const ExperimentConfig& config, bool needs_noise) {
  if (config.particle_count < 2) throw std::invalid_argument("experiment: L must be >= 2");
  if (needs_noise && !(config.noise_std > 0.0)) {
    throw std::invalid_argument("experiment: noise_std must be positive");
  }
}

std::filesystem::path prepare_dir(const ExperimentConfig& config) {
  std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double sample_std(const std::vector<double>& values) {
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                      static_cast<double>(values.size());
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

}  // namespace

ProgressionSettings ExperimentConfig::progression() const { return settings_from(*this); }

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

LinearRunSummary run_linear(const ExperimentConfig& config) {
  validate(config, true);
  const auto dir = prepare_dir(config);
  const Likelihood lik = linear_likelihood(config.y_hat, config.noise_std);
  CommonRunArtifacts run = run_flow_against_grid(config, lik);

  const GaussianSpec kalman = kalman_posterior(kPrior, config.y_hat, config.noise_std);
  const auto affine_map = [&](double x) {
    return kalman.mean + (kalman.std / kPrior.std) * (x - kPrior.mean);
  };

  LinearRunSummary summary;
  summary.posterior = run.flow.posterior;
  summary.report = run.flow.report;
  summary.posterior_mean = weighted_mean(run.flow.posterior)[0];
  summary.posterior_std = particle_std(run.flow.posterior);
  summary.kalman_mean = kalman.mean;
  summary.kalman_std = kalman.std;
  summary.w1 = run.w1;

  const double lo90 = kPrior.mean - kCentral90 * kPrior.std;
  const double hi90 = kPrior.mean + kCentral90 * kPrior.std;
  summary.map_sup_norm = map_sup_norm(run.flow.chain, affine_map, lo90, hi90, kSupNormPoints);

  const bool small_l = config.particle_count <= 10;
  const double std_tol = small_l ? kLinearStdTolSmallL : kLinearStdTol;
  const double map_tol = small_l ? kLinearMapSupTolSmallL : kLinearMapSupTol;
  summary.checks = {
      {"posterior_mean_near_kalman", std::abs(summary.posterior_mean - kalman.mean) <= kLinearMeanTol,
       std::abs(summary.posterior_mean - kalman.mean), kLinearMeanTol},
      {"posterior_std_near_kalman",
       std::abs(summary.posterior_std / kalman.std - 1.0) <= std_tol,
       std::abs(summary.posterior_std / kalman.std - 1.0), std_tol},
      {"map_matches_affine_kalman_map", summary.map_sup_norm <= map_tol,
       summary.map_sup_norm, map_tol},
  };

  const MapCurve curve =
      sample_map_curve(run.flow.chain, affine_map, kPrior.mean - 3.0 * kPrior.std,
                       kPrior.mean + 3.0 * kPrior.std, kMapCurvePoints);
  write_common_outputs(dir, run, curve, "linear update");

  nlohmann::json doc{{"experiment", "linear"},
                     {"config", config_to_json(config)},
                     {"posterior_mean", summary.posterior_mean},
                     {"posterior_std", summary.posterior_std},
                     {"kalman_mean", summary.kalman_mean},
                     {"kalman_std", summary.kalman_std},
                     {"w1_vs_oracle", summary.w1},
                     {"map_sup_norm_central90", summary.map_sup_norm},
                     {"substeps", run.flow.report.substep_count()},
                     {"checks", checks_to_json(summary.checks)},
                     {"passed", all_passed(summary.checks)}};
  write_text(dir / "summary.json", doc.dump(2));
  return summary;
}

CubicRunSummary run_cubic(const ExperimentConfig& config) {
  validate(config, true);
  const auto dir = prepare_dir(config);
  const Likelihood lik = cubic_likelihood(config.y_hat, config.noise_std);
  CommonRunArtifacts run = run_flow_against_grid(config, lik);

  const auto& gp = run.gp;
  const auto quantile_transport = [&](double x) {
    return quantile(gp, normal_cdf((x - kPrior.mean) / kPrior.std));
  };

  CubicRunSummary summary;
  summary.posterior = run.flow.posterior;
  summary.report = run.flow.report;
  summary.posterior_mean = weighted_mean(run.flow.posterior)[0];
  summary.w1 = run.w1;

  // Oracle-relative baseline: L equal-mass midpoint quantiles of the grid
  // posterior itself.
  {
    const std::size_t count = config.particle_count;
    std::vector<double> qs(count);
    for (std::size_t i = 0; i < count; ++i) {
      qs[i] = quantile(gp, (static_cast<double>(i) + 0.5) / static_cast<double>(count));
    }
    summary.w1_quantile_baseline = w1_particles_vs_grid(make_equal_weight(std::move(qs)), gp);
  }

  const double lo90 = kPrior.mean - kCentral90 * kPrior.std;
  const double hi90 = kPrior.mean + kCentral90 * kPrior.std;
  summary.map_sup_norm =
      map_sup_norm(run.flow.chain, quantile_transport, lo90, hi90, kSupNormPoints);

  summary.checks = {
      {"w1_within_factor_of_quantile_baseline",
       summary.w1 <= kCubicW1Factor * summary.w1_quantile_baseline, summary.w1,
       kCubicW1Factor * summary.w1_quantile_baseline},
      {"map_matches_quantile_transport", summary.map_sup_norm <= kCubicMapSupTol,
       summary.map_sup_norm, kCubicMapSupTol},
  };

  const MapCurve curve =
      sample_map_curve(run.flow.chain, quantile_transport, kPrior.mean - 3.0 * kPrior.std,
                       kPrior.mean + 3.0 * kPrior.std, kMapCurvePoints);
  write_common_outputs(dir, run, curve, "cubic sensor");

  // Per-sub-step particle trajectory (step 0 = prior).
  const auto states = trajectory_states(run.prior, run.flow);
  {
    auto out = open_output(dir / "flow_trajectory.csv");
    out << "step,gamma,particle,x\n";
    char buf[96];
    double gamma = 0.0;
    for (std::size_t s = 0; s < states.size(); ++s) {
      if (s > 0) gamma += run.flow.report.substeps[s - 1].dgamma;
      for (std::size_t i = 0; i < states[s].size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%zu,%.17g", s, gamma, i, states[s][i]);
        out << buf << "\n";
      }
    }
  }
  {
    SvgPlot plot("cubic sensor: particle flow", "cumulative gamma", "x");
    std::vector<double> gammas(states.size(), 0.0);
    for (std::size_t s = 1; s < states.size(); ++s) {
      gammas[s] = gammas[s - 1] + run.flow.report.substeps[s - 1].dgamma;
    }
    for (std::size_t i = 0; i < config.particle_count; ++i) {
      std::vector<double> xs(states.size());
      for (std::size_t s = 0; s < states.size(); ++s) xs[s] = states[s][i];
      plot.add_line(gammas, xs, "#0e9e9e", 1.0);
    }
    plot.write_file((dir / "plot_flow.svg").string());
  }

  nlohmann::json doc{{"experiment", "cubic"},
                     {"config", config_to_json(config)},
                     {"posterior_mean", summary.posterior_mean},
                     {"w1_vs_oracle", summary.w1},
                     {"w1_quantile_baseline", summary.w1_quantile_baseline},
                     {"map_sup_norm_central90", summary.map_sup_norm},
                     {"substeps", run.flow.report.substep_count()},
                     {"checks", checks_to_json(summary.checks)},
                     {"passed", all_passed(summary.checks)}};
  write_text(dir / "summary.json", doc.dump(2));
  return summary;
}

QuarticCompareSummary run_quartic_compare(const ExperimentConfig& config) {
  validate(config, false);
  const auto dir = prepare_dir(config);
  const Likelihood lik = quartic_likelihood();

  CommonRunArtifacts run = run_flow_against_grid(config, lik);
  CommonRunArtifacts rerun = run_flow_against_grid(config, lik);  // determinism headline

  QuarticCompareSummary summary;
  summary.posterior = run.flow.posterior;
  summary.report = run.flow.report;
  summary.flow_w1 = run.w1;
  summary.flow_w1_repeat = rerun.w1;

  // 10 seeded SIR runs for each sweep size, all independent; run concurrently
  // and collect into fixed slots so the output order is deterministic.
  const std::vector<std::size_t> sweep{50, 100, 200, 500};
  constexpr int kRuns = 10;
  struct Job {
    std::size_t l_index;
    int run_index;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t li = 0; li < sweep.size(); ++li) {
    for (int r = 0; r < kRuns; ++r) {
      const auto j = static_cast<std::uint64_t>(li) * kRuns + static_cast<std::uint64_t>(r);
      jobs.push_back({li, r, config.seed + 10007ULL * (j + 1)});
    }
  }
  std::vector<double> w1_slots(jobs.size());
  {
    const auto& gp = run.gp;
    std::vector<std::future<void>> futures;
    futures.reserve(jobs.size());
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      futures.push_back(std::async(std::launch::async, [&, j] {
        const Job& job = jobs[j];
        const ParticleSet prior = deterministic_gaussian_samples(kPrior, sweep[job.l_index]);
        const ParticleSet resampled = sir_baseline(prior, lik, job.seed);
        w1_slots[j] = w1_particles_vs_grid(resampled, gp);
      }));
    }
    for (auto& f : futures) f.get();
  }

  for (std::size_t li = 0; li < sweep.size(); ++li) {
    SirSweepEntry entry;
    entry.particle_count = sweep[li];
    for (int r = 0; r < kRuns; ++r) entry.w1_runs.push_back(w1_slots[li * kRuns + r]);
    entry.median_w1 = median(entry.w1_runs);
    entry.std_w1 = sample_std(entry.w1_runs);
    summary.sir.push_back(std::move(entry));
  }

  std::size_t flow_entry = 0;
  for (std::size_t li = 0; li < sweep.size(); ++li) {
    if (sweep[li] == config.particle_count) flow_entry = li;
  }

  summary.checks = {
      {"flow_w1_beats_median_sir", summary.flow_w1 <= summary.sir[flow_entry].median_w1,
       summary.flow_w1, summary.sir[flow_entry].median_w1},
      {"flow_deterministic", summary.flow_w1 == summary.flow_w1_repeat,
       std::abs(summary.flow_w1 - summary.flow_w1_repeat), 0.0},
  };
  bool medians_monotone = true;
  for (std::size_t li = 1; li < summary.sir.size(); ++li) {
    if (summary.sir[li].median_w1 > summary.sir[li - 1].median_w1) medians_monotone = false;
  }
  summary.checks.push_back({"sir_median_w1_non_increasing", medians_monotone,
                            summary.sir.back().median_w1, summary.sir.front().median_w1});
  bool stds_positive = true;
  double min_std = summary.sir.front().std_w1;
  for (const auto& entry : summary.sir) {
    min_std = std::min(min_std, entry.std_w1);
    if (!(entry.std_w1 > 0.0)) stds_positive = false;
  }
  summary.checks.push_back({"sir_w1_run_to_run_std_positive", stds_positive, min_std, 0.0});

  const auto quantile_transport = [&](double x) {
    return quantile(run.gp, normal_cdf((x - kPrior.mean) / kPrior.std));
  };
  const MapCurve curve =
      sample_map_curve(run.flow.chain, quantile_transport, kPrior.mean - 3.0 * kPrior.std,
                       kPrior.mean + 3.0 * kPrior.std, kMapCurvePoints);
  write_common_outputs(dir, run, curve, "quartic likelihood");

  {
    auto out = open_output(dir / "sir_runs.csv");
    out << "L,run,seed,w1\n";
    char buf[96];
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%zu,%d,%llu,%.17g", sweep[jobs[j].l_index],
                    jobs[j].run_index, static_cast<unsigned long long>(jobs[j].seed),
                    w1_slots[j]);
      out << buf << "\n";
    }
  }
  {
    SvgPlot plot("flow vs standard particle filter", "particle count L", "W1 to oracle");
    std::vector<double> all_l, all_w1, med_l, med_w1;
    for (const auto& entry : summary.sir) {
      for (double v : entry.w1_runs) {
        all_l.push_back(static_cast<double>(entry.particle_count));
        all_w1.push_back(v);
      }
      med_l.push_back(static_cast<double>(entry.particle_count));
      med_w1.push_back(entry.median_w1);
    }
    plot.add_points(all_l, all_w1, "#777777", 2.5);
    plot.add_line(med_l, med_w1, "#c23b3b", 1.8);
    const std::vector<double> fx{med_l.front(), med_l.back()};
    const std::vector<double> fy{summary.flow_w1, summary.flow_w1};
    plot.add_line(fx, fy, "#0e9e9e", 1.8, true);
    plot.add_legend("SIR runs", "#777777");
    plot.add_legend("SIR median", "#c23b3b");
    plot.add_legend("flow (deterministic)", "#0e9e9e");
    plot.write_file((dir / "plot_compare.svg").string());
  }

  nlohmann::json sir = nlohmann::json::array();
  for (const auto& entry : summary.sir) {
    sir.push_back({{"L", entry.particle_count},
                   {"w1_runs", entry.w1_runs},
                   {"median_w1", entry.median_w1},
                   {"std_w1", entry.std_w1}});
  }
  nlohmann::json doc{{"experiment", "quartic-compare"},
                     {"config", config_to_json(config)},
                     {"flow_w1", summary.flow_w1},
                     {"flow_w1_repeat", summary.flow_w1_repeat},
                     {"sir", sir},
                     {"substeps", run.flow.report.substep_count()},
                     {"checks", checks_to_json(summary.checks)},
                     {"passed", all_passed(summary.checks)}};
  write_text(dir / "summary.json", doc.dump(2));
  return summary;
}

CustomRunSummary run_custom(const ExperimentConfig& config, const std::string& expression) {
  validate(config, false);
  const auto dir = prepare_dir(config);

  const Expression expr = Expression::parse(expression);
  const Likelihood lik("custom", [expr](std::span<const double> x) { return expr.eval(x[0]); });

  CommonRunArtifacts run = run_flow_against_grid(config, lik);

  const auto quantile_transport = [&](double x) {
    return quantile(run.gp, normal_cdf((x - kPrior.mean) / kPrior.std));
  };

  CustomRunSummary summary;
  summary.posterior = run.flow.posterior;
  summary.report = run.flow.report;
  summary.posterior_mean = weighted_mean(run.flow.posterior)[0];
  summary.posterior_std = particle_std(run.flow.posterior);
  summary.w1 = run.w1;

  const double lo90 = kPrior.mean - kCentral90 * kPrior.std;
  const double hi90 = kPrior.mean + kCentral90 * kPrior.std;
  summary.map_sup_norm =
      map_sup_norm(run.flow.chain, quantile_transport, lo90, hi90, kSupNormPoints);

  const MapCurve curve =
      sample_map_curve(run.flow.chain, quantile_transport, kPrior.mean - 3.0 * kPrior.std,
                       kPrior.mean + 3.0 * kPrior.std, kMapCurvePoints);
  write_common_outputs(dir, run, curve, "custom likelihood");

  nlohmann::json doc{{"experiment", "custom"},
                     {"expression", expression},
                     {"config", config_to_json(config)},
                     {"posterior_mean", summary.posterior_mean},
                     {"posterior_std", summary.posterior_std},
                     {"w1_vs_oracle", summary.w1},
                     {"map_sup_norm_central90", summary.map_sup_norm},
                     {"substeps", run.flow.report.substep_count()},
                     {"checks", checks_to_json(summary.checks)},
                     {"passed", true}};
  write_text(dir / "summary.json", doc.dump(2));
  return summary;
}

}  // namespace driftflow
