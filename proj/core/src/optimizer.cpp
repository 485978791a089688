#include "driftflow/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace driftflow {

namespace {

constexpr double kCurvatureFloor = 1e-10;  // skip updates with s'y below this * |s||y|

double max_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

bool all_finite(double value, const std::vector<double>& grad) {
  if (!std::isfinite(value)) return false;
  for (double g : grad) {
    if (!std::isfinite(g)) return false;
  }
  return true;
}

}  // namespace

BfgsResult minimize(const Objective& obj, std::span<const double> start,
                    const BfgsSettings& settings) {
  if (start.empty()) throw std::invalid_argument("minimize: empty parameter vector");
  if (!(settings.armijo_c1 > 0.0 && settings.armijo_c1 < 1.0) ||
      !(settings.backtrack_factor > 0.0 && settings.backtrack_factor < 1.0) ||
      !(settings.initial_step > 0.0) || !(settings.grad_tol > 0.0) ||
      settings.max_iters < 1) {
    throw std::invalid_argument("minimize: invalid settings");
  }
  const std::size_t n = start.size();

  BfgsResult result;
  std::vector<double> x(start.begin(), start.end());
  std::vector<double> grad(n);
  double value = obj(x, grad);
  if (!all_finite(value, grad)) {
    result.argmin = std::move(x);
    result.value = value;
    result.aborted = true;
    result.message = "objective non-finite at the start point";
    return result;
  }

  if (max_norm(grad) <= settings.grad_tol) {
    result.argmin = std::move(x);
    result.value = value;
    result.converged = true;
    return result;
  }

  // Inverse-Hessian approximation, dense row-major n x n, starts at identity.
  std::vector<double> h(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;

  std::vector<double> dir(n), x_new(n), grad_new(n), s(n), y(n), hy(n);

  for (int iter = 1; iter <= settings.max_iters; ++iter) {
    // dir = -H * grad
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      const double* row = h.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * grad[j];
      dir[i] = -acc;
    }
    double slope = dot(dir, grad);
    if (!(slope < 0.0)) {
      // Rounding has destroyed the descent property; restart from steepest
      // descent.
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) h[i * n + j] = (i == j) ? 1.0 : 0.0;
        dir[i] = -grad[i];
      }
      slope = dot(dir, grad);
    }

    double step = settings.initial_step;
    const double dir_norm = norm2(dir);
    if (dir_norm > 0.0 && step * dir_norm > settings.max_step_norm) {
      step = settings.max_step_norm / dir_norm;
    }
    bool accepted = false;
    double value_new = value;
    for (int bt = 0; bt < settings.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * dir[i];
      value_new = obj(x_new, grad_new);
      if (all_finite(value_new, grad_new) &&
          value_new <= value + settings.armijo_c1 * step * slope) {
        accepted = true;
        break;
      }
      step *= settings.backtrack_factor;
    }
    if (!accepted) {
      result.argmin = std::move(x);
      result.value = value;
      result.iters = iter - 1;
      result.aborted = true;
      result.message = "line search found no finite decrease";
      return result;
    }

    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = grad_new[i] - grad[i];
    }
    x = x_new;
    value = value_new;
    grad = grad_new;
    result.iters = iter;
    if (settings.on_iterate) settings.on_iterate(iter, value);

    if (max_norm(grad) <= settings.grad_tol) {
      result.converged = true;
      break;
    }

    const double sy = dot(s, y);
    if (sy > kCurvatureFloor * norm2(s) * norm2(y)) {
      // H <- (I - rho s y') H (I - rho y s') + rho s s'
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        const double* row = h.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * y[j];
        hy[i] = acc;
      }
      const double yhy = dot(y, hy);
      for (std::size_t i = 0; i < n; ++i) {
        double* row = h.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) {
          row[j] += -rho * (s[i] * hy[j] + hy[i] * s[j]) +
                    rho * (1.0 + rho * yhy) * s[i] * s[j];
        }
      }
    }
  }

  result.argmin = std::move(x);
  result.value = value;
  return result;
}

}  // namespace driftflow
