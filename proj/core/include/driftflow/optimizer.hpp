#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace driftflow {

// Evaluates the objective at params and writes the gradient (same length)
// into grad_out. Returns the value.
using Objective = std::function<double(std::span<const double> params, std::span<double> grad_out)>;

struct BfgsSettings {
  double grad_tol = 1e-6;        // max-norm convergence threshold
  int max_iters = 200;
  double armijo_c1 = 1e-4;
  double backtrack_factor = 0.5;
  double initial_step = 1.0;
  int max_backtracks = 40;       // line-search gives up after this many halvings
  // Cap on the Euclidean length of any trial step. Objectives that decay in
  // a far field (the xlog tail does) need this to keep iterates inside the
  // basin the start point belongs to; infinity leaves the search unrestricted.
  double max_step_norm = std::numeric_limits<double>::infinity();
  // Optional trace of accepted iterates (iteration index, objective value).
  std::function<void(int, double)> on_iterate;
};

struct BfgsResult {
  std::vector<double> argmin;
  double value = 0.0;
  int iters = 0;
  bool converged = false;   // gradient max-norm fell below grad_tol
  bool aborted = false;     // non-finite value/gradient or failed line search
  std::string message;
};

// BFGS with backtracking (Armijo) line search. The inverse-Hessian
// approximation starts at identity; rank-two updates are skipped when the
// curvature s'y <= 1e-10 |s||y|. Accepted iterates never increase the
// objective, and identical inputs produce bitwise-identical iterate
// sequences. On a non-finite evaluation the best iterate seen so far is
// returned with aborted = true.
BfgsResult minimize(const Objective& obj, std::span<const double> start,
                    const BfgsSettings& settings);

}  // namespace driftflow
