// Self-adaptive differential evolution over the probability simplex.
//
// Four mutation strategies are drawn per candidate by stochastic universal
// sampling; selection probabilities and per-strategy crossover-rate medians
// adapt from success/failure counts over a sliding window of the last
// `learning_period` generations. Trial vectors are repaired onto the simplex
// (clamp to [0,1], renormalize) before evaluation, and a trial replaces its
// target on J(trial) <= J(target).
//
// Determinism: every random draw is taken from one sequential generator in
// candidate order while trial vectors are built; fitness evaluation happens
// afterwards, so results are independent of how evaluations are scheduled.
#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "camid/fitness.hpp"
#include "camid/rng.hpp"

namespace camid::sade {

enum class Strategy : int {
  rand1 = 0,
  rand_to_best2 = 1,
  rand2 = 2,
  current_to_rand1 = 3,
};

inline constexpr int kStrategyCount = 4;
const char* to_string(Strategy s);

struct SadeConfig {
  int population = 100;      // NP; needs five distinct neighbors plus self
  int learning_period = 50;  // LP, generations in the adaptation window
  int max_generations = 500;
  double f_mean = 0.5;
  double f_spread = 0.3;   // std of the scale-factor draw, truncated to (0,2]
  double cr_init = 0.5;
  double cr_spread = 0.1;  // std around the per-strategy CR median
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

struct SadeRunResult {
  std::vector<double> best_theta;
  double best_fitness = 0.0;
  // best_fitness after initialization (index 0) and after each generation.
  std::vector<double> fitness_trace;
  // Probabilities in effect during each generation.
  std::vector<std::array<double, kStrategyCount>> strategy_prob_trace;
  // Fraction of that generation's trials per strategy that violated bounds
  // or the sum-to-one constraint before repair (0 when unused).
  std::vector<std::array<double, kStrategyCount>> cvr_trace;
  long evaluations = 0;
  std::uint64_t seed = 0;
};

// Clamp to [0,1] then renormalize to sum 1. The flag reports whether any
// clamp fired or the pre-normalization sum was off by more than 1e-9.
// An all-zero clamp result falls back to the uniform vector.
struct RepairResult {
  std::vector<double> theta;
  bool was_infeasible = false;
};
RepairResult repair(std::span<const double> v);

// Trial vector for one candidate. `neighbors` are the five distinct indices
// r1..r5 (!= candidate); f is the scale factor; f_arith the recombination
// coefficient used only by current_to_rand1.
std::vector<double> mutate(Strategy strategy,
                           const std::vector<std::vector<double>>& population,
                           int candidate, const std::vector<double>& best,
                           const int neighbors[5], double f, double f_arith);

// Binomial crossover: keep trial[j] where coin < cr or j == j_rand, else
// copy target[j]. Draws one coin per component from rng. Callers skip this
// entirely for current_to_rand1 (arithmetic recombination has no crossover).
void binomial_crossover(std::vector<double>& trial,
                        const std::vector<double>& target, double cr,
                        int j_rand, Rng& rng);

// Stochastic universal sampling of `count` strategies: realized counts stay
// within one of count * p; the assignment order is then shuffled.
std::vector<Strategy> sus_assign(const std::array<double, kStrategyCount>& probs,
                                 int count, Rng& rng);

// Sliding-window success/failure and CR statistics driving the adaptation.
class StrategyAdaptation {
 public:
  StrategyAdaptation(int learning_period, double cr_init);

  void begin_generation();
  void record_success(Strategy s, double cr, bool has_cr);
  void record_failure(Strategy s);
  // Pushes the pending generation into the window; once the window holds
  // learning_period generations, refreshes probabilities and CR medians.
  void end_generation();

  const std::array<double, kStrategyCount>& probabilities() const {
    return probabilities_;
  }
  double cr_median(Strategy s) const { return cr_median_[static_cast<int>(s)]; }

 private:
  struct GenerationRecord {
    std::array<long, kStrategyCount> successes{};
    std::array<long, kStrategyCount> failures{};
    std::array<std::vector<double>, kStrategyCount> successful_crs;
  };

  void refresh();

  int learning_period_;
  std::array<double, kStrategyCount> probabilities_;
  std::array<double, kStrategyCount> cr_median_;
  std::deque<GenerationRecord> window_;
  GenerationRecord pending_;
};

// Full run against a prebuilt evaluator (shared across runs of a scenario).
SadeRunResult run(const FitnessEvaluator& objective, const SadeConfig& config);

}  // namespace camid::sade
