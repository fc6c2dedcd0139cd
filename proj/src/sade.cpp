#include "camid/sade.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace camid::sade {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::rand1: return "rand/1";
    case Strategy::rand_to_best2: return "rand-to-best/2";
    case Strategy::rand2: return "rand/2";
    case Strategy::current_to_rand1: return "current-to-rand/1";
  }
  return "?";
}

void SadeConfig::validate() const {
  if (population < 6)
    throw std::invalid_argument("population must be >= 6 (five distinct neighbors plus self)");
  if (learning_period < 1) throw std::invalid_argument("learning_period must be >= 1");
  if (max_generations < 1) throw std::invalid_argument("max_generations must be >= 1");
  if (!(f_spread >= 0.0) || !(cr_spread >= 0.0) || !std::isfinite(f_mean) ||
      !std::isfinite(cr_init))
    throw std::invalid_argument("invalid distribution parameters");
}

RepairResult repair(std::span<const double> v) {
  RepairResult out;
  out.theta.resize(v.size());
  bool clamped = false;
  double sum = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!std::isfinite(v[j]))
      throw std::invalid_argument("repair requires finite components");
    double x = v[j];
    if (x < 0.0) x = 0.0;
    if (x > 1.0) x = 1.0;
    clamped = clamped || x != v[j];
    out.theta[j] = x;
    sum += x;
  }
  out.was_infeasible = clamped || std::fabs(sum - 1.0) > 1e-9;
  if (sum == 0.0) {
    std::fill(out.theta.begin(), out.theta.end(), 1.0 / static_cast<double>(v.size()));
    out.was_infeasible = true;
  } else {
    for (double& x : out.theta) x /= sum;
  }
  return out;
}

std::vector<double> mutate(Strategy strategy,
                           const std::vector<std::vector<double>>& population,
                           int candidate, const std::vector<double>& best,
                           const int r[5], double f, double f_arith) {
  const std::vector<double>& self = population[candidate];
  const std::size_t k = self.size();
  std::vector<double> trial(k);
  switch (strategy) {
    case Strategy::rand1: {
      const auto &a = population[r[0]], &b = population[r[1]], &c = population[r[2]];
      for (std::size_t j = 0; j < k; ++j) trial[j] = a[j] + f * (b[j] - c[j]);
      break;
    }
    case Strategy::rand_to_best2: {
      const auto &a = population[r[0]], &b = population[r[1]];
      const auto &c = population[r[2]], &d = population[r[3]];
      for (std::size_t j = 0; j < k; ++j)
        trial[j] = self[j] + f * (best[j] - self[j]) + f * (a[j] - b[j]) +
                   f * (c[j] - d[j]);
      break;
    }
    case Strategy::rand2: {
      const auto &a = population[r[0]], &b = population[r[1]];
      const auto &c = population[r[2]], &d = population[r[3]], &e = population[r[4]];
      for (std::size_t j = 0; j < k; ++j)
        trial[j] = a[j] + f * (b[j] - c[j]) + f * (d[j] - e[j]);
      break;
    }
    case Strategy::current_to_rand1: {
      const auto &a = population[r[0]], &b = population[r[1]], &c = population[r[2]];
      for (std::size_t j = 0; j < k; ++j)
        trial[j] = self[j] + f_arith * (a[j] - self[j]) + f * (b[j] - c[j]);
      break;
    }
  }
  return trial;
}

void binomial_crossover(std::vector<double>& trial,
                        const std::vector<double>& target, double cr,
                        int j_rand, Rng& rng) {
  for (std::size_t j = 0; j < trial.size(); ++j) {
    const double coin = draw::u01(rng);
    if (!(coin < cr || static_cast<int>(j) == j_rand)) trial[j] = target[j];
  }
}

std::vector<Strategy> sus_assign(const std::array<double, kStrategyCount>& probs,
                                 int count, Rng& rng) {
  std::array<double, kStrategyCount> cum{};
  double acc = 0.0;
  for (int s = 0; s < kStrategyCount; ++s) {
    acc += probs[s];
    cum[s] = acc;
  }

  std::vector<Strategy> out(count);
  const double u = draw::u01(rng);
  int s = 0;
  for (int j = 0; j < count; ++j) {
    const double pointer = (u + j) / count;
    while (s < kStrategyCount - 1 && pointer >= cum[s]) ++s;
    out[j] = static_cast<Strategy>(s);
  }
  // The pointer sweep yields assignments sorted by strategy index; shuffle so
  // candidate slots are not tied to particular strategies.
  for (int j = count - 1; j > 0; --j) {
    const int m = static_cast<int>(draw::index(rng, static_cast<std::uint64_t>(j) + 1));
    std::swap(out[j], out[m]);
  }
  return out;
}

StrategyAdaptation::StrategyAdaptation(int learning_period, double cr_init)
    : learning_period_(learning_period) {
  probabilities_.fill(1.0 / kStrategyCount);
  cr_median_.fill(cr_init);
}

void StrategyAdaptation::begin_generation() { pending_ = GenerationRecord{}; }

void StrategyAdaptation::record_success(Strategy s, double cr, bool has_cr) {
  const int idx = static_cast<int>(s);
  ++pending_.successes[idx];
  if (has_cr) pending_.successful_crs[idx].push_back(cr);
}

void StrategyAdaptation::record_failure(Strategy s) {
  ++pending_.failures[static_cast<int>(s)];
}

void StrategyAdaptation::end_generation() {
  window_.push_back(std::move(pending_));
  pending_ = GenerationRecord{};
  if (static_cast<int>(window_.size()) > learning_period_) window_.pop_front();
  if (static_cast<int>(window_.size()) >= learning_period_) refresh();
}

void StrategyAdaptation::refresh() {
  constexpr double kFloor = 0.01;
  std::array<double, kStrategyCount> rate{};
  double total = 0.0;
  for (int s = 0; s < kStrategyCount; ++s) {
    long succ = 0, fail = 0;
    for (const auto& rec : window_) {
      succ += rec.successes[s];
      fail += rec.failures[s];
    }
    rate[s] = (succ + fail > 0 ? static_cast<double>(succ) / static_cast<double>(succ + fail)
                               : 0.0) +
              kFloor;
    total += rate[s];
  }
  for (int s = 0; s < kStrategyCount; ++s) probabilities_[s] = rate[s] / total;

  for (int s = 0; s < kStrategyCount; ++s) {
    std::vector<double> crs;
    for (const auto& rec : window_)
      crs.insert(crs.end(), rec.successful_crs[s].begin(),
                 rec.successful_crs[s].end());
    if (crs.empty()) continue;  // keep the previous median
    std::sort(crs.begin(), crs.end());
    const std::size_t n = crs.size();
    cr_median_[s] = n % 2 ? crs[n / 2] : 0.5 * (crs[n / 2 - 1] + crs[n / 2]);
  }
}

namespace {

double draw_scale_factor(Rng& rng, double mean, double spread) {
  double f;
  do {
    f = draw::normal(rng, mean, spread);
  } while (!(f > 0.0 && f <= 2.0));
  return f;
}

double draw_crossover_rate(Rng& rng, double median, double spread) {
  double cr;
  do {
    cr = draw::normal(rng, median, spread);
  } while (!(cr >= 0.0 && cr <= 1.0));
  return cr;
}

void sample_distinct_neighbors(Rng& rng, int population, int self, int out[5]) {
  int got = 0;
  while (got < 5) {
    const int r = static_cast<int>(draw::index(rng, population));
    if (r == self) continue;
    bool seen = false;
    for (int j = 0; j < got; ++j) seen = seen || out[j] == r;
    if (!seen) out[got++] = r;
  }
}

}  // namespace

SadeRunResult run(const FitnessEvaluator& objective, const SadeConfig& config) {
  config.validate();
  const int k = objective.k();
  const int np = config.population;

  SadeRunResult result;
  result.seed = config.seed;

  if (k == 1) {
    // The simplex is a single point; nothing to search.
    result.best_theta = {1.0};
    result.best_fitness = objective.evaluate(result.best_theta);
    result.fitness_trace = {result.best_fitness};
    result.evaluations = 1;
    return result;
  }

  Rng rng(config.seed);

  std::vector<std::vector<double>> population(np);
  std::vector<double> flat(static_cast<std::size_t>(np) * k);
  std::vector<double> scratch(k);
  for (int i = 0; i < np; ++i) {
    for (double& x : scratch) x = draw::u01(rng);
    population[i] = repair(scratch).theta;
    std::copy(population[i].begin(), population[i].end(),
              flat.begin() + static_cast<std::size_t>(i) * k);
  }

  std::vector<double> j_pop(np);
  objective.evaluate_batch(flat, np, j_pop);
  result.evaluations = np;

  int best = 0;
  for (int i = 1; i < np; ++i)
    if (j_pop[i] < j_pop[best]) best = i;
  result.best_theta = population[best];
  result.best_fitness = j_pop[best];
  result.fitness_trace.reserve(config.max_generations + 1);
  result.fitness_trace.push_back(result.best_fitness);

  StrategyAdaptation adapt(config.learning_period, config.cr_init);

  std::vector<double> j_trial(np);
  std::vector<double> cr_used(np, 0.0);
  std::vector<std::vector<double>> trials(np);

  for (int gen = 1; gen <= config.max_generations; ++gen) {
    const std::array<double, kStrategyCount> probs = adapt.probabilities();
    const std::vector<Strategy> strategies = sus_assign(probs, np, rng);
    adapt.begin_generation();

    std::array<long, kStrategyCount> trial_count{};
    std::array<long, kStrategyCount> violation_count{};

    // All random draws happen here, sequentially in candidate order; the
    // evaluation below is free to run in any order.
    for (int i = 0; i < np; ++i) {
      const Strategy s = strategies[i];
      const int j_rand = static_cast<int>(draw::index(rng, k));
      int neighbors[5];
      sample_distinct_neighbors(rng, np, i, neighbors);
      const double f = draw_scale_factor(rng, config.f_mean, config.f_spread);

      std::vector<double> trial;
      if (s == Strategy::current_to_rand1) {
        const double f_arith = draw::u01(rng);
        trial = mutate(s, population, i, result.best_theta, neighbors, f, f_arith);
      } else {
        trial = mutate(s, population, i, result.best_theta, neighbors, f, 0.0);
        cr_used[i] = draw_crossover_rate(rng, adapt.cr_median(s), config.cr_spread);
        binomial_crossover(trial, population[i], cr_used[i], j_rand, rng);
      }

      RepairResult repaired = repair(trial);
      const int si = static_cast<int>(s);
      ++trial_count[si];
      if (repaired.was_infeasible) ++violation_count[si];
      std::copy(repaired.theta.begin(), repaired.theta.end(),
                flat.begin() + static_cast<std::size_t>(i) * k);
      trials[i] = std::move(repaired.theta);
    }

    objective.evaluate_batch(flat, np, j_trial);
    result.evaluations += np;

    for (int i = 0; i < np; ++i) {
      const Strategy s = strategies[i];
      if (j_trial[i] <= j_pop[i]) {
        population[i] = std::move(trials[i]);
        j_pop[i] = j_trial[i];
        adapt.record_success(s, cr_used[i], s != Strategy::current_to_rand1);
        if (j_trial[i] < result.best_fitness) {
          result.best_fitness = j_trial[i];
          result.best_theta = population[i];
        }
      } else {
        adapt.record_failure(s);
      }
    }
    adapt.end_generation();

    result.fitness_trace.push_back(result.best_fitness);
    result.strategy_prob_trace.push_back(probs);
    std::array<double, kStrategyCount> cvr{};
    for (int s = 0; s < kStrategyCount; ++s)
      cvr[s] = trial_count[s] > 0 ? static_cast<double>(violation_count[s]) /
                                        static_cast<double>(trial_count[s])
                                  : 0.0;
    result.cvr_trace.push_back(cvr);
  }

  return result;
}

}  // namespace camid::sade
