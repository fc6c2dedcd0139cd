// Independent reference solver for the identification objective.
//
// The objective is convex in the weight vector (linear one-step predictor,
// weighted L1 loss, simplex constraint), so a projected subgradient descent
// converges to the global optimum. It is deliberately a different algorithmic
// family from the evolutionary search: agreement between the two is evidence,
// not a tautology.
#pragma once

#include <span>
#include <vector>

#include "camid/fitness.hpp"

namespace camid::oracle {

// Euclidean projection onto {x >= 0, sum(x) = 1}. Idempotent and
// non-expansive; feasible inputs pass through unchanged.
std::vector<double> simplex_project(std::span<const double> v);

struct SubgradientOptions {
  long max_iterations = 200000;
  // Step length is step_scale / sqrt(iter) along the normalized subgradient.
  double step_scale = 0.05;
  // Converged when the best objective improves by less than tolerance over
  // a full check window.
  double tolerance = 1e-10;
  long check_window = 100;
};

struct OracleResult {
  std::vector<double> theta;
  double objective = 0.0;
  long iterations = 0;
  bool converged = false;
};

// Minimizes the evaluator's objective over the simplex from the uniform
// start. Desk-scale only: throws if k > 64. Returns the best iterate seen.
OracleResult solve_projected_subgradient(
    const FitnessEvaluator& objective,
    const SubgradientOptions& options = SubgradientOptions{});

}  // namespace camid::oracle
