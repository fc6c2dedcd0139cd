#include "camid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace camid::oracle {

std::vector<double> simplex_project(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n == 0) throw std::invalid_argument("cannot project an empty vector");
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument("projection requires finite input");

  // Already feasible: return unchanged (keeps the fixed-point property exact).
  double sum = std::accumulate(v.begin(), v.end(), 0.0);
  bool nonneg = std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
  if (nonneg && sum == 1.0) return std::vector<double>(v.begin(), v.end());

  // Held et al. thresholding: shift by the largest tau with sum(max(v-tau,0))=1.
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    running += sorted[j];
    const double candidate = (running - 1.0) / static_cast<double>(j + 1);
    if (j + 1 == n || sorted[j + 1] <= candidate) {
      tau = candidate;
      break;
    }
  }
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = std::max(v[j] - tau, 0.0);
  return out;
}

OracleResult solve_projected_subgradient(const FitnessEvaluator& objective,
                                         const SubgradientOptions& options) {
  const int k = objective.k();
  if (k > 64) throw std::invalid_argument("oracle is desk-scale only (k <= 64)");
  if (options.max_iterations < 1 || options.check_window < 1 ||
      !(options.step_scale > 0.0))
    throw std::invalid_argument("invalid subgradient options");

  std::vector<double> theta(k, 1.0 / k);
  std::vector<double> grad(k);
  std::vector<double> shifted(k);

  OracleResult best;
  best.theta = theta;
  best.objective = objective.evaluate(theta);

  double window_reference = best.objective;
  long window_start = 0;

  for (long iter = 1; iter <= options.max_iterations; ++iter) {
    const double value = objective.evaluate_with_subgradient(theta, grad);
    if (value < best.objective) {
      best.objective = value;
      best.theta = theta;
    }

    double norm_sq = 0.0;
    for (double g : grad) norm_sq += g * g;
    best.iterations = iter;
    if (norm_sq == 0.0) {  // exact minimizer (noiseless data at the truth)
      best.converged = true;
      return best;
    }

    const double step =
        options.step_scale / (std::sqrt(static_cast<double>(iter)) * std::sqrt(norm_sq));
    for (int j = 0; j < k; ++j) shifted[j] = theta[j] - step * grad[j];
    theta = simplex_project(shifted);

    if (iter - window_start >= options.check_window) {
      if (window_reference - best.objective < options.tolerance) {
        best.converged = true;
        return best;
      }
      window_reference = best.objective;
      window_start = iter;
    }
  }
  best.converged = false;
  return best;
}

}  // namespace camid::oracle
