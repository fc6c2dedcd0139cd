#include <array>
#include <cmath>
#include <numeric>

#include "camid/sade.hpp"
#include "camid/scenario.hpp"
#include "camid/suite.hpp"
#include "doctest.h"

using namespace camid;
using namespace camid::sade;

namespace {

bool on_simplex(const std::vector<double>& v, double tol = 1e-9) {
  double sum = 0.0;
  for (double x : v) {
    if (x < 0.0 || x > 1.0) return false;
    sum += x;
  }
  return std::fabs(sum - 1.0) <= tol;
}

std::vector<std::vector<double>> tiny_population() {
  return {{0.6, 0.4}, {0.1, 0.9}, {0.3, 0.7}, {0.8, 0.2}, {0.5, 0.5},
          {0.2, 0.8}, {0.9, 0.1}, {0.4, 0.6}};
}

}  // namespace

TEST_CASE("repair: feasible vectors pass through unflagged") {
  const auto r = repair(std::vector<double>{0.5, 0.5});
  CHECK(r.theta == std::vector<double>{0.5, 0.5});
  CHECK(!r.was_infeasible);
}

TEST_CASE("repair: clamp then renormalize") {
  const auto r = repair(std::vector<double>{-0.2, 0.6, 0.6});
  REQUIRE(r.theta.size() == 3);
  CHECK(r.theta[0] == 0.0);
  CHECK(r.theta[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.theta[2] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.was_infeasible);

  const auto s = repair(std::vector<double>{2.0, 0.0});
  CHECK(s.theta == std::vector<double>{1.0, 0.0});
  CHECK(s.was_infeasible);
}

TEST_CASE("repair: all-zero clamp result falls back to uniform") {
  const auto r = repair(std::vector<double>{-1.0, -2.0, 0.0, -0.5});
  CHECK(r.theta == std::vector<double>(4, 0.25));
  CHECK(r.was_infeasible);
}

TEST_CASE("repair: sum drift beyond 1e-9 is flagged even without clamping") {
  const auto r = repair(std::vector<double>{0.5, 0.6});
  CHECK(r.was_infeasible);
  CHECK(on_simplex(r.theta, 1e-12));
  const auto ok = repair(std::vector<double>{0.5, 0.5 + 1e-10});
  CHECK(!ok.was_infeasible);
}

TEST_CASE("repair lands on the simplex for arbitrary finite input") {
  Rng rng(41);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> v(1 + draw::index(rng, 12));
    for (double& x : v) x = 6.0 * draw::u01(rng) - 3.0;
    CHECK(on_simplex(repair(v).theta, 1e-12));
  }
  CHECK_THROWS_AS(repair(std::vector<double>{0.1, std::nan("")}),
                  std::invalid_argument);
}

TEST_CASE("mutation formulas collapse as expected in degenerate cases") {
  const auto pop = tiny_population();
  const std::vector<double> best{0.35, 0.65};

  SUBCASE("rand/1 with equal difference donors returns the base donor") {
    const int r[5] = {1, 4, 4, 6, 7};
    CHECK(mutate(Strategy::rand1, pop, 0, best, r, 0.7, 0.0) == pop[1]);
  }
  SUBCASE("current-to-rand/1 with zero coefficients returns the target") {
    const int r[5] = {1, 2, 3, 4, 5};
    CHECK(mutate(Strategy::current_to_rand1, pop, 0, best, r, 0.0, 0.0) ==
          pop[0]);
  }
  SUBCASE("rand-to-best/2 on an identical population returns that member") {
    const std::vector<std::vector<double>> same(8, std::vector<double>{0.3, 0.7});
    const int r[5] = {1, 2, 3, 4, 5};
    const auto trial =
        mutate(Strategy::rand_to_best2, same, 0, same[0], r, 1.3, 0.0);
    CHECK(trial[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(trial[1] == doctest::Approx(0.7).epsilon(1e-15));
  }
  SUBCASE("rand/2 combines five donors") {
    const int r[5] = {0, 1, 2, 3, 4};
    const auto trial = mutate(Strategy::rand2, pop, 5, pop[5], r, 0.5, 0.0);
    CHECK(trial[0] == doctest::Approx(0.6 + 0.5 * (0.1 - 0.3) + 0.5 * (0.8 - 0.5))
                          .epsilon(1e-15));
  }
}

TEST_CASE("binomial crossover honors the CR extremes") {
  Rng rng(43);
  const std::vector<double> target{0.1, 0.2, 0.3, 0.4};

  std::vector<double> trial{0.4, 0.3, 0.2, 0.1};
  binomial_crossover(trial, target, 1.0, 2, rng);
  CHECK(trial == std::vector<double>{0.4, 0.3, 0.2, 0.1});

  for (int j_rand = 0; j_rand < 4; ++j_rand) {
    std::vector<double> t2{0.4, 0.3, 0.2, 0.1};
    binomial_crossover(t2, target, 0.0, j_rand, rng);
    for (int j = 0; j < 4; ++j) {
      if (j == j_rand)
        CHECK(t2[j] == doctest::Approx(0.4 - 0.1 * j).epsilon(1e-15));
      else
        CHECK(t2[j] == target[j]);
    }
  }
}

TEST_CASE("strategy sampling follows the probabilities") {
  Rng rng(44);

  SUBCASE("degenerate distribution always picks the same strategy") {
    const auto picks = sus_assign({0.0, 1.0, 0.0, 0.0}, 50, rng);
    for (auto s : picks) CHECK(s == Strategy::rand_to_best2);
  }

  SUBCASE("uniform probabilities give near-equal counts every generation") {
    for (int rep = 0; rep < 20; ++rep) {
      const auto picks = sus_assign({0.25, 0.25, 0.25, 0.25}, 100, rng);
      std::array<int, kStrategyCount> counts{};
      for (auto s : picks) ++counts[static_cast<int>(s)];
      for (int c : counts) {
        CHECK(c >= 24);
        CHECK(c <= 26);
      }
    }
  }

  SUBCASE("realized counts stay within one of the expectation") {
    const std::array<double, kStrategyCount> probs{0.03, 0.47, 0.3, 0.2};
    for (int rep = 0; rep < 20; ++rep) {
      const auto picks = sus_assign(probs, 100, rng);
      std::array<int, kStrategyCount> counts{};
      for (auto s : picks) ++counts[static_cast<int>(s)];
      for (int s = 0; s < kStrategyCount; ++s) {
        CHECK(counts[s] >= std::floor(100 * probs[s]) - 0);
        CHECK(counts[s] <= std::ceil(100 * probs[s]) + 0);
      }
    }
  }

  SUBCASE("long-run frequencies match the probabilities within 1%") {
    const std::array<double, kStrategyCount> probs{0.1, 0.4, 0.25, 0.25};
    std::array<long, kStrategyCount> counts{};
    const int generations = 10000;
    for (int g = 0; g < generations; ++g)
      for (auto s : sus_assign(probs, 10, rng)) ++counts[static_cast<int>(s)];
    for (int s = 0; s < kStrategyCount; ++s) {
      const double freq =
          static_cast<double>(counts[s]) / (10.0 * generations);
      CHECK(freq == doctest::Approx(probs[s]).epsilon(0).scale(0.01));
    }
  }
}

TEST_CASE("adaptation: probabilities stay frozen through the learning period") {
  StrategyAdaptation adapt(5, 0.5);
  for (int g = 0; g < 4; ++g) {
    adapt.begin_generation();
    adapt.record_success(Strategy::rand1, 0.5, true);
    adapt.record_failure(Strategy::rand2);
    adapt.end_generation();
    for (double p : adapt.probabilities())
      CHECK(p == doctest::Approx(0.25).epsilon(1e-15));
  }
  adapt.begin_generation();
  adapt.record_success(Strategy::rand1, 0.5, true);
  adapt.end_generation();
  CHECK(adapt.probabilities()[0] > 0.25);
}

TEST_CASE("adaptation: the floor keeps unused strategies selectable") {
  StrategyAdaptation adapt(3, 0.5);
  for (int g = 0; g < 3; ++g) {
    adapt.begin_generation();
    adapt.record_success(Strategy::rand1, 0.4, true);
    adapt.end_generation();
  }
  const auto& p = adapt.probabilities();
  // rates: [1+e, e, e, e] with e = 0.01
  CHECK(p[0] == doctest::Approx(1.01 / 1.04).epsilon(1e-12));
  for (int s = 1; s < kStrategyCount; ++s)
    CHECK(p[s] == doctest::Approx(0.01 / 1.04).epsilon(1e-12));
  CHECK(p[0] > 0.9);
}

TEST_CASE("adaptation: symmetric success keeps the uniform distribution") {
  StrategyAdaptation adapt(2, 0.5);
  for (int g = 0; g < 2; ++g) {
    adapt.begin_generation();
    for (int s = 0; s < kStrategyCount; ++s) {
      adapt.record_success(static_cast<Strategy>(s), 0.5, true);
      adapt.record_failure(static_cast<Strategy>(s));
    }
    adapt.end_generation();
  }
  for (double p : adapt.probabilities())
    CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("adaptation: CR medians track successful crossover rates") {
  StrategyAdaptation adapt(2, 0.5);
  adapt.begin_generation();
  adapt.record_success(Strategy::rand1, 0.9, true);
  adapt.record_success(Strategy::rand1, 0.8, true);
  adapt.record_success(Strategy::current_to_rand1, 0.1, false);  // no CR
  adapt.end_generation();
  adapt.begin_generation();
  adapt.record_success(Strategy::rand1, 0.7, true);
  adapt.end_generation();
  CHECK(adapt.cr_median(Strategy::rand1) == doctest::Approx(0.8).epsilon(1e-15));
  // untouched strategies keep the initial median
  CHECK(adapt.cr_median(Strategy::rand2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(adapt.cr_median(Strategy::current_to_rand1) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("config validation rejects undersized populations") {
  SadeConfig cfg;
  cfg.population = 5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.population = 6;
  CHECK_NOTHROW(cfg.validate());
  cfg.max_generations = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("single-parameter problems return immediately") {
  std::vector<Configuration> traj{Configuration(1, 1, 0.2),
                                  Configuration(1, 1, 0.9),
                                  Configuration(1, 1, 0.4)};
  const FitnessEvaluator objective(traj, {Topology::manhattan, 0});
  SadeConfig cfg;
  cfg.seed = 9;
  const auto result = run(objective, cfg);
  CHECK(result.best_theta == std::vector<double>{1.0});
  CHECK(result.best_fitness == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(result.evaluations == 1);
}

TEST_CASE("short searches: determinism, accounting, and invariants") {
  ScenarioSpec spec;
  spec.topology = Topology::manhattan;
  spec.radius = 1;
  spec.height = spec.width = 9;
  spec.steps = 4;
  spec.seed = 51;
  const auto data = build_dataset(spec);
  const FitnessEvaluator objective(data);

  SadeConfig cfg;
  cfg.population = 20;
  cfg.learning_period = 5;
  cfg.max_generations = 60;
  cfg.seed = 7;

  const auto a = run(objective, cfg);
  const auto b = run(objective, cfg);
  CHECK(a.best_theta == b.best_theta);
  CHECK(a.best_fitness == b.best_fitness);
  CHECK(a.fitness_trace == b.fitness_trace);
  CHECK(a.strategy_prob_trace == b.strategy_prob_trace);
  CHECK(a.cvr_trace == b.cvr_trace);

  cfg.seed = 8;
  const auto c = run(objective, cfg);
  CHECK(a.best_theta != c.best_theta);

  CHECK(a.evaluations == 20 + 20 * 60);
  REQUIRE(a.fitness_trace.size() == 61);
  for (std::size_t g = 1; g < a.fitness_trace.size(); ++g)
    CHECK(a.fitness_trace[g] <= a.fitness_trace[g - 1]);
  CHECK(a.best_fitness == a.fitness_trace.back());
  CHECK(on_simplex(a.best_theta, 1e-12));

  REQUIRE(a.strategy_prob_trace.size() == 60);
  for (const auto& probs : a.strategy_prob_trace) {
    double sum = 0.0;
    for (double p : probs) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (const auto& cvr : a.cvr_trace)
    for (double v : cvr) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
}

TEST_CASE("a noiseless cross identification recovers the rule") {
  ScenarioSpec spec;
  spec.topology = Topology::manhattan;
  spec.radius = 1;
  spec.height = spec.width = 21;
  spec.steps = 10;
  spec.snr_db.reset();
  spec.seed = 61;
  const auto data = build_dataset(spec);
  const FitnessEvaluator objective(data);

  SadeConfig cfg;
  cfg.seed = 1;
  const auto result = run(objective, cfg);
  CHECK(suite::nrmse_percent(result.best_theta, data.truth.weights()) < 1.0);
}
