// Acceptance suite: one line per criterion, nonzero exit if any fail.
// Each criterion pins its tolerances here, in code.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "driftflow/experiments.hpp"
#include "test_helpers.hpp"

using namespace driftflow;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool passed, const std::string& detail) {
  std::printf("criterion %d %s: %s — %s\n", number, passed ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  if (!passed) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "driftflow_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

double standard_normal_logpdf(double x) {
  return -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi);
}

const Likelihood flat_likelihood("flat", [](std::span<const double>) { return 0.0; });

// ---------------------------------------------------------------- criterion 1

void criterion_1_distance_identities() {
  testing::TestRng rng(20240901);
  int exact_zero_failures = 0;
  double worst_permutation_gap = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 1 + rng.index(3);
    const std::size_t count = 2 + rng.index(19);  // L <= 20
    const ParticleSet set = testing::random_set(rng, count, dim);
    for (double c : {0.0, 1.0, 10.0}) {
      CvmConfig cfg;
      cfg.mean_penalty_weight = c;
      if (cvm_distance(set, set, cfg) != 0.0) ++exact_zero_failures;
    }

    // Permutation invariance on a second, independent pair.
    const ParticleSet x = testing::random_set(rng, 2 + rng.index(19), dim);
    const ParticleSet y = testing::random_set(rng, 2 + rng.index(19), dim);
    CvmConfig cfg;
    const double base = cvm_distance(x, y, cfg);

    std::vector<std::size_t> order(x.count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    std::vector<double> w(x.count()), locs(x.count() * dim);
    for (std::size_t i = 0; i < x.count(); ++i) {
      w[i] = x.weight(order[i]);
      const auto loc = x.location(order[i]);
      std::copy(loc.begin(), loc.end(), locs.begin() + i * dim);
    }
    const double shuffled = cvm_distance(ParticleSet(dim, w, locs), y, cfg);
    worst_permutation_gap = std::max(worst_permutation_gap, std::abs(shuffled - base));
  }
  const bool passed = exact_zero_failures == 0 && worst_permutation_gap <= 1e-12;
  report(1, "distance identities",
         passed,
         "self-distance exact-zero failures " + std::to_string(exact_zero_failures) +
             "/600, worst permutation gap " + fmt(worst_permutation_gap));
}

// ---------------------------------------------------------------- criterion 2

double fd_rel_gap_cvm(testing::TestRng& rng) {
  const std::size_t dim = 1 + rng.index(3);
  const std::size_t count = 2 + rng.index(9);
  const ParticleSet x = testing::random_set(rng, count, dim);
  const ParticleSet y = testing::random_set(rng, count, dim);
  CvmConfig cfg;
  cfg.include_dyy = false;
  const auto analytic = cvm_gradient(x, y, cfg);
  double scale = 1e-8, gap = 0.0;
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    std::vector<double> plus = x.locations(), minus = x.locations();
    plus[k] += 1e-6;
    minus[k] -= 1e-6;
    const double fd = (cvm_distance(ParticleSet(dim, x.weights(), plus), y, cfg) -
                       cvm_distance(ParticleSet(dim, x.weights(), minus), y, cfg)) /
                      2e-6;
    scale = std::max(scale, std::abs(fd));
    gap = std::max(gap, std::abs(fd - analytic[k]));
  }
  return gap / scale;
}

double fd_rel_gap_map(testing::TestRng& rng) {
  const std::size_t dim = 1 + rng.index(2);
  const std::size_t rbfs = rng.index(2) ? 3 : 8;
  std::vector<double> a(dim * dim), b(dim), v(dim * rbfs);
  std::vector<double> centers(rbfs * dim), widths(rbfs);
  for (auto& t : a) t = rng.uniform(-1.2, 1.2);
  for (auto& t : b) t = rng.uniform(-0.8, 0.8);
  for (auto& t : v) t = rng.uniform(-0.8, 0.8);
  for (auto& t : centers) t = rng.uniform(-2.0, 2.0);
  for (auto& t : widths) t = rng.uniform(0.4, 1.8);
  const RbfMap map(dim, a, b, v, centers, widths);

  const ParticleSet inputs = testing::random_set(rng, 4 + rng.index(5), dim);
  const ParticleSet target = testing::random_set(rng, 4 + rng.index(5), dim);
  CvmConfig cfg;
  cfg.include_dyy = false;

  const auto value_at = [&](std::span<const double> params) {
    const RbfMap m = map.with_params(params);
    return cvm_distance(make_equal_weight(dim, apply_map_batch(m, inputs.locations())), target,
                        cfg);
  };
  const ParticleSet mapped = make_equal_weight(dim, apply_map_batch(map, inputs.locations()));
  const auto analytic =
      map_param_gradient(map, inputs.locations(), cvm_gradient(mapped, target, cfg));

  const auto params = map.pack_params();
  double scale = 1e-8, gap = 0.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto plus = params;
    auto minus = params;
    plus[k] += 1e-6;
    minus[k] -= 1e-6;
    const double fd = (value_at(plus) - value_at(minus)) / 2e-6;
    scale = std::max(scale, std::abs(fd));
    gap = std::max(gap, std::abs(fd - analytic[k]));
  }
  return gap / scale;
}

void criterion_2_gradient_fidelity() {
  testing::TestRng rng(7070);
  double worst_cvm = 0.0, worst_map = 0.0;
  for (int trial = 0; trial < 100; ++trial) worst_cvm = std::max(worst_cvm, fd_rel_gap_cvm(rng));
  for (int trial = 0; trial < 100; ++trial) worst_map = std::max(worst_map, fd_rel_gap_map(rng));
  const bool passed = worst_cvm < 1e-5 && worst_map < 1e-5;
  report(2, "gradient fidelity", passed,
         "worst rel gap: locations " + fmt(worst_cvm) + ", map parameters " + fmt(worst_map) +
             " (tolerance 1e-5)");
}

// ----------------------------------------------- shared experiment flow runs

bool g_descent_monotone = true;

struct FlowCase {
  std::string name;
  ParticleSet prior;
  FlowResult flow;
};

std::vector<FlowCase> g_flows;

// Flags any accepted iterate that increased its own minimization's value.
// A fresh minimize run restarts the iteration counter, which resets the
// comparison state.
BfgsSettings monotone_checked_bfgs() {
  struct State {
    int last_iter = 0;
    double last_value = 0.0;
  };
  BfgsSettings settings;
  auto state = std::make_shared<State>();
  settings.on_iterate = [state](int iter, double value) {
    if (iter == state->last_iter + 1 && state->last_iter > 0 && value > state->last_value) {
      g_descent_monotone = false;
    }
    state->last_iter = iter;
    state->last_value = value;
  };
  return settings;
}

void run_experiment_flows() {
  const auto add = [](const std::string& name, std::size_t count, const Likelihood& lik) {
    ParticleSet prior = deterministic_gaussian_samples({0.0, 1.0}, count);
    ProgressionSettings settings;
    settings.bfgs = monotone_checked_bfgs();
    FlowResult flow = flow_update(prior, lik, settings);
    g_flows.push_back({name, std::move(prior), std::move(flow)});
  };
  for (double noise : {1.0, 0.6, 0.3}) {
    add("linear sv=" + fmt(noise), 30, linear_likelihood(1.0, noise));
  }
  add("cubic", 50, cubic_likelihood(1.0, 1.0));
  add("quartic", 50, quartic_likelihood());
}

// ---------------------------------------------------------------- criterion 3

void criterion_3_optimizer_sanity() {
  const Objective rosenbrock = [](std::span<const double> p, std::span<double> g) {
    const double x = p[0], y = p[1];
    const double a = y - x * x;
    g[0] = -400.0 * a * x - 2.0 * (1.0 - x);
    g[1] = 200.0 * a;
    return 100.0 * a * a + (1.0 - x) * (1.0 - x);
  };
  double last = std::numeric_limits<double>::infinity();
  bool monotone = true;
  BfgsSettings settings;
  settings.on_iterate = [&](int, double value) {
    if (value > last) monotone = false;
    last = value;
  };
  const BfgsResult res = minimize(rosenbrock, std::vector<double>{-1.2, 1.0}, settings);
  const double gap = std::max(std::abs(res.argmin[0] - 1.0), std::abs(res.argmin[1] - 1.0));
  const bool passed = res.converged && res.iters <= 200 && gap <= 1e-6 && monotone &&
                      g_descent_monotone;
  report(3, "optimizer sanity", passed,
         "rosenbrock gap " + fmt(gap) + " in " + std::to_string(res.iters) +
             " iters, monotone descent " +
             ((monotone && g_descent_monotone) ? "held" : "violated") +
             " (incl. all experiment sub-step fits)");
}

// ------------------------------------------------------------ criteria 4 and 5

void criterion_4_linear_reproduction() {
  bool passed = true;
  std::string detail;
  for (double noise : {1.0, 0.6, 0.3}) {
    ExperimentConfig config;
    config.particle_count = 30;
    config.noise_std = noise;
    config.output_dir = fresh_dir("c4_linear_" + fmt(noise)).string();
    const LinearRunSummary s = run_linear(config);
    const bool mean_ok = std::abs(s.posterior_mean - s.kalman_mean) <= 0.1;
    const bool std_ok = std::abs(s.posterior_std / s.kalman_std - 1.0) <= 0.15;
    const bool map_ok = s.map_sup_norm <= 0.05;
    passed = passed && mean_ok && std_ok && map_ok;
    detail += "sv=" + fmt(noise) + " [dmean " + fmt(std::abs(s.posterior_mean - s.kalman_mean)) +
              ", dstd " + fmt(std::abs(s.posterior_std / s.kalman_std - 1.0)) + ", map " +
              fmt(s.map_sup_norm) + "] ";
  }
  {
    ExperimentConfig config;
    config.particle_count = 10;
    config.noise_std = 0.3;
    config.output_dir = fresh_dir("c4_linear_L10").string();
    const LinearRunSummary s = run_linear(config);
    const bool std_ok = std::abs(s.posterior_std / s.kalman_std - 1.0) <= 0.25;
    passed = passed && std_ok;
    detail += "L=10 dstd " + fmt(std::abs(s.posterior_std / s.kalman_std - 1.0));
  }
  report(4, "linear reproduction", passed, detail);
}

void criterion_5_cubic_sensor() {
  ExperimentConfig config;
  config.particle_count = 50;
  config.output_dir = fresh_dir("c5_cubic").string();
  const CubicRunSummary s = run_cubic(config);
  const bool w1_ok = s.w1 <= 2.0 * s.w1_quantile_baseline;
  const bool map_ok = s.map_sup_norm <= 0.1;
  report(5, "cubic sensor", w1_ok && map_ok,
         "w1 " + fmt(s.w1) + " vs 2x baseline " + fmt(2.0 * s.w1_quantile_baseline) + ", map " +
             fmt(s.map_sup_norm) + " (tolerance 0.1)");
}

// ---------------------------------------------------------------- criterion 6

Likelihood likelihood_for(const std::string& name) {
  if (name == "cubic") return cubic_likelihood(1.0, 1.0);
  if (name == "quartic") return quartic_likelihood();
  const double noise = std::stod(name.substr(name.find('=') + 1));
  return linear_likelihood(1.0, noise);
}

void criterion_6_progression_invariants() {
  bool passed = true;
  std::string detail;
  for (const auto& fc : g_flows) {
    const FlowResult& flow = fc.flow;
    const double count = static_cast<double>(fc.prior.count());
    const Likelihood lik = likelihood_for(fc.name);

    double gamma_sum = 0.0;
    bool ess_ok = true, descent_ok = true;
    for (const auto& rec : flow.report.substeps) {
      gamma_sum += rec.dgamma;
      if (!rec.degeneration_warning && rec.ess_before_resample < 0.5 * count - 1e-9) {
        ess_ok = false;
      }
      if (rec.distance_final > rec.distance_initial) descent_ok = false;
    }
    const bool gamma_ok = std::abs(gamma_sum - 1.0) <= 1e-12 && flow.report.completed;

    bool compose_ok = true;
    for (std::size_t i = 0; i < fc.prior.count(); ++i) {
      if (compose(flow.chain, fc.prior.location(i))[0] != flow.posterior.location(i)[0]) {
        compose_ok = false;
      }
    }

    // Tempering additivity at three splits of the unit exponent.
    bool additive_ok = true;
    for (double g1 : {0.25, 0.5, 0.7}) {
      const ParticleSet two =
          bayes_reweight(bayes_reweight(fc.prior, lik, g1), lik, 1.0 - g1);
      const ParticleSet one = bayes_reweight(fc.prior, lik, 1.0);
      for (std::size_t i = 0; i < two.count(); ++i) {
        if (std::abs(two.weight(i) - one.weight(i)) > 1e-12) additive_ok = false;
      }
    }

    if (!(gamma_ok && ess_ok && descent_ok && compose_ok && additive_ok)) {
      passed = false;
      detail += fc.name + " violated; ";
    }
  }
  if (detail.empty()) detail = "gamma sums, ESS floor, descent, composition, additivity all hold";
  report(6, "progression invariants", passed, detail);
}

// ---------------------------------------------------------------- criterion 7

void criterion_7_particle_filter_comparison() {
  ExperimentConfig config;
  config.particle_count = 50;
  config.seed = 1;
  config.output_dir = fresh_dir("c7_quartic").string();
  const QuarticCompareSummary s = run_quartic_compare(config);

  double median_at_50 = 0.0;
  bool medians_monotone = true, stds_positive = true;
  for (std::size_t i = 0; i < s.sir.size(); ++i) {
    if (s.sir[i].particle_count == 50) median_at_50 = s.sir[i].median_w1;
    if (i > 0 && s.sir[i].median_w1 > s.sir[i - 1].median_w1) medians_monotone = false;
    if (!(s.sir[i].std_w1 > 0.0)) stds_positive = false;
  }
  const bool flow_0_std = s.flow_w1 == s.flow_w1_repeat;  // exactly zero spread
  const bool flow_beats = s.flow_w1 <= median_at_50;
  report(7, "particle filter comparison", flow_beats && medians_monotone && stds_positive && flow_0_std,
         "flow w1 " + fmt(s.flow_w1) + " vs median SIR " + fmt(median_at_50) +
             ", medians monotone " + (medians_monotone ? "yes" : "no") + ", stds positive " +
             (stds_positive ? "yes" : "no") + ", flow spread exactly 0 " +
             (flow_0_std ? "yes" : "no"));
}

// ---------------------------------------------------------------- criterion 8

void criterion_8_degenerate_robustness() {
  const ParticleSet prior = deterministic_gaussian_samples({0.0, 1.0}, 30);
  const GridPosterior prior_grid =
      grid_posterior(standard_normal_logpdf, flat_likelihood, -8.0, 8.0, 4001);
  const double floor = w1_particles_vs_grid(prior, prior_grid);

  const FlowResult flat_flow = flow_update(prior, flat_likelihood, ProgressionSettings{});
  const double flat_w1 = w1_particles_vs_grid(flat_flow.posterior, prior_grid);
  const bool flat_ok =
      flat_flow.posterior.locations() == prior.locations() && flat_w1 <= floor + 1e-12;

  // All mass on one particle, for any tempering exponent: a spike far
  // narrower than the particle spacing, but positive everywhere so moved
  // particles stay evaluable.
  const Likelihood spike = linear_likelihood(prior.location(11)[0], 1e-4);
  ProgressionSettings settings;
  settings.max_substeps = 8;
  bool spike_ok = true;
  std::string spike_note = "completed with warning";
  try {
    const FlowResult spike_flow = flow_update(prior, spike, settings);
    if (!spike_flow.report.degeneration_warning) {
      spike_ok = false;
      spike_note = "no degeneration warning";
    }
    for (double x : spike_flow.posterior.locations()) {
      if (!std::isfinite(x)) {
        spike_ok = false;
        spike_note = "non-finite posterior";
      }
    }
  } catch (const std::exception& e) {
    spike_ok = false;
    spike_note = std::string("threw: ") + e.what();
  }

  report(8, "degenerate robustness", flat_ok && spike_ok,
         "flat-case w1 " + fmt(flat_w1) + " vs floor " + fmt(floor) + "; spike case " +
             spike_note);
}

// ---------------------------------------------------------------- criterion 9

bool identical_trees(const fs::path& a, const fs::path& b) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(a)) {
    names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  for (const auto& name : names) {
    if (!fs::exists(b / name) || slurp(a / name) != slurp(b / name)) return false;
  }
  return true;
}

void criterion_9_reproducibility() {
  bool passed = true;
  std::string detail;

  const auto check = [&](const std::string& name, const std::function<void(const std::string&)>& runner) {
    const fs::path dir_a = fresh_dir("c9_" + name + "_a");
    const fs::path dir_b = fresh_dir("c9_" + name + "_b");
    runner(dir_a.string());
    runner(dir_b.string());
    const bool same = identical_trees(dir_a, dir_b);
    passed = passed && same;
    detail += name + (same ? " ok; " : " DIFFERS; ");
  };

  check("linear", [](const std::string& out) {
    ExperimentConfig c;
    c.particle_count = 30;
    c.output_dir = out;
    run_linear(c);
  });
  check("cubic", [](const std::string& out) {
    ExperimentConfig c;
    c.particle_count = 50;
    c.output_dir = out;
    run_cubic(c);
  });
  check("quartic", [](const std::string& out) {
    ExperimentConfig c;
    c.particle_count = 50;
    c.output_dir = out;
    run_quartic_compare(c);
  });
  check("custom", [](const std::string& out) {
    ExperimentConfig c;
    c.particle_count = 20;
    c.output_dir = out;
    run_custom(c, "-(x-1)^2/2");
  });

  report(9, "reproducibility", passed, detail);
}

}  // namespace

int main() {
  run_experiment_flows();  // shared by criteria 3 and 6

  criterion_1_distance_identities();
  criterion_2_gradient_fidelity();
  criterion_3_optimizer_sanity();
  criterion_4_linear_reproduction();
  criterion_5_cubic_sensor();
  criterion_6_progression_invariants();
  criterion_7_particle_filter_comparison();
  criterion_8_degenerate_robustness();
  criterion_9_reproducibility();

  if (g_failures == 0) {
    std::printf("all 9 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", g_failures);
  return 1;
}
