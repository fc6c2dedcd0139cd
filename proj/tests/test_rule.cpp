#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "camid/rng.hpp"
#include "camid/rule.hpp"
#include "doctest.h"

using camid::Configuration;
using camid::NeighborhoodSpec;
using camid::RuleParams;
using camid::Topology;

namespace {

Configuration random_cfg(int h, int w, camid::Rng& rng) {
  std::vector<double> cells(static_cast<std::size_t>(h) * w);
  for (double& c : cells) c = camid::draw::u01(rng);
  return Configuration(h, w, cells);
}

RuleParams random_rule(const NeighborhoodSpec& spec, camid::Rng& rng) {
  std::vector<double> w(spec.size());
  double sum = 0.0;
  for (double& x : w) {
    x = camid::draw::u01(rng);
    sum += x;
  }
  for (double& x : w) x /= sum;
  return RuleParams(spec, w);
}

// Independent stencil: per-cell loop with its own modular arithmetic.
Configuration brute_force_step(const Configuration& cfg, const RuleParams& rule) {
  const auto offs = rule.spec().offsets();
  Configuration out(cfg.height(), cfg.width(), 0.0);
  for (int r = 0; r < cfg.height(); ++r) {
    for (int c = 0; c < cfg.width(); ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < offs.size(); ++j) {
        int rr = (r + offs[j].dy) % cfg.height();
        if (rr < 0) rr += cfg.height();
        int cc = (c + offs[j].dx) % cfg.width();
        if (cc < 0) cc += cfg.width();
        acc += rule.weights()[j] * cfg.at(rr, cc);
      }
      out.set(r, c, std::clamp(acc, 0.0, 1.0));
    }
  }
  return out;
}

Configuration translated(const Configuration& cfg, int dy, int dx) {
  Configuration out(cfg.height(), cfg.width(), 0.0);
  for (int r = 0; r < cfg.height(); ++r)
    for (int c = 0; c < cfg.width(); ++c)
      out.set(r, c, cfg.at_wrapped(r + dy, c + dx));
  return out;
}

}  // namespace

TEST_CASE("rule weights are validated") {
  const NeighborhoodSpec spec{Topology::manhattan, 1};
  CHECK_THROWS_AS(RuleParams(spec, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(RuleParams(spec, {0.4, 0.2, 0.2, 0.2, 0.2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(RuleParams(spec, {-0.1, 0.4, 0.3, 0.2, 0.2}),
                  std::invalid_argument);
  CHECK_NOTHROW(RuleParams(spec, {0.2, 0.2, 0.2, 0.2, 0.2}));
}

TEST_CASE("gathering a uniform grid yields K copies") {
  const Configuration cfg(6, 6, 0.37);
  for (auto t : {Topology::manhattan, Topology::moore}) {
    const NeighborhoodSpec spec{t, 2};
    const auto n = gather_neighborhood(cfg, 3, 3, spec);
    REQUIRE(static_cast<int>(n.size()) == spec.size());
    for (double v : n) CHECK(v == 0.37);
  }
}

TEST_CASE("gathering picks the center value in offset order") {
  Configuration cfg(5, 5, 0.0);
  cfg.set(2, 2, 1.0);
  const auto n =
      gather_neighborhood(cfg, 2, 2, NeighborhoodSpec{Topology::manhattan, 1});
  CHECK(n == std::vector<double>{0, 0, 1, 0, 0});
}

TEST_CASE("corner gathering wraps toroidally") {
  std::vector<double> cells(9);
  for (int i = 0; i < 9; ++i) cells[i] = i / 10.0;
  const Configuration cfg(3, 3, cells);
  const auto n =
      gather_neighborhood(cfg, 0, 0, NeighborhoodSpec{Topology::moore, 1});
  // offsets (-1,-1)...(1,1) against hand-computed wrapped indices
  const std::vector<double> expected{0.8, 0.6, 0.7, 0.2, 0.0,
                                     0.1, 0.5, 0.3, 0.4};
  CHECK(n == expected);
}

TEST_CASE("out-of-bounds gather cell is rejected") {
  const Configuration cfg(3, 3, 0.5);
  CHECK_THROWS_AS(
      gather_neighborhood(cfg, 3, 0, NeighborhoodSpec{Topology::moore, 1}),
      std::invalid_argument);
}

TEST_CASE("a constant grid is a fixed point of any rule") {
  const Configuration cfg(7, 5, 0.42);
  camid::Rng rng(5);
  for (auto t : {Topology::manhattan, Topology::moore}) {
    const auto rule = random_rule({t, 2}, rng);
    const auto out = apply_rule(cfg, rule);
    for (double v : out.cells()) CHECK(v == doctest::Approx(0.42).epsilon(1e-15));
  }
}

TEST_CASE("one-hot center weight is the identity rule") {
  camid::Rng rng(6);
  const auto cfg = random_cfg(6, 9, rng);
  const auto rule = RuleParams::identity({Topology::manhattan, 2});
  CHECK(apply_rule(cfg, rule) == cfg);
}

TEST_CASE("uniform radius-1 weights average the 5-cell stencil") {
  camid::Rng rng(8);
  const auto cfg = random_cfg(5, 5, rng);
  const auto rule = RuleParams::uniform({Topology::manhattan, 1});
  const auto out = apply_rule(cfg, rule);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      const double mean =
          (cfg.at_wrapped(r - 1, c) + cfg.at_wrapped(r, c - 1) + cfg.at(r, c) +
           cfg.at_wrapped(r, c + 1) + cfg.at_wrapped(r + 1, c)) /
          5.0;
      CHECK(out.at(r, c) == doctest::Approx(mean).epsilon(1e-14));
    }
  }
}

TEST_CASE("update agrees with the brute-force stencil") {
  camid::Rng rng(9);
  for (int rep = 0; rep < 10; ++rep) {
    const int h = 5 + static_cast<int>(camid::draw::index(rng, 5));
    const int w = 5 + static_cast<int>(camid::draw::index(rng, 5));
    const auto cfg = random_cfg(h, w, rng);
    const auto t = rep % 2 ? Topology::moore : Topology::manhattan;
    const int radius = 1 + static_cast<int>(camid::draw::index(rng, 2));
    const auto rule = random_rule({t, radius}, rng);
    const auto fast = apply_rule(cfg, rule);
    const auto slow = brute_force_step(cfg, rule);
    for (std::size_t i = 0; i < fast.size(); ++i)
      CHECK(fast.cells()[i] == doctest::Approx(slow.cells()[i]).epsilon(1e-14));
  }
}

TEST_CASE("convex updates cannot escape the value hull") {
  camid::Rng rng(10);
  for (int rep = 0; rep < 60; ++rep) {
    const auto cfg = random_cfg(6, 7, rng);
    const auto t = rep % 2 ? Topology::moore : Topology::manhattan;
    const int radius = 1 + static_cast<int>(camid::draw::index(rng, 3));
    const auto rule = random_rule({t, radius}, rng);

    const auto [lo0, hi0] =
        std::minmax_element(cfg.cells().begin(), cfg.cells().end());
    const auto out = apply_rule(cfg, rule);
    const auto [lo1, hi1] =
        std::minmax_element(out.cells().begin(), out.cells().end());
    CHECK(*lo1 >= *lo0 - 1e-15);
    CHECK(*hi1 <= *hi0 + 1e-15);
  }
}

TEST_CASE("the value interval is non-increasing along a trajectory") {
  camid::Rng rng(12);
  const auto cfg = random_cfg(9, 9, rng);
  const auto rule = random_rule({Topology::moore, 1}, rng);
  const auto traj = evolve(cfg, rule, 8);
  for (std::size_t t = 1; t < traj.size(); ++t) {
    const auto [lo0, hi0] = std::minmax_element(traj[t - 1].cells().begin(),
                                                traj[t - 1].cells().end());
    const auto [lo1, hi1] =
        std::minmax_element(traj[t].cells().begin(), traj[t].cells().end());
    CHECK(*lo1 >= *lo0 - 1e-15);
    CHECK(*hi1 <= *hi0 + 1e-15);
  }
}

TEST_CASE("the update commutes with toroidal translation") {
  camid::Rng rng(13);
  const auto cfg = random_cfg(6, 8, rng);
  const auto rule = random_rule({Topology::manhattan, 2}, rng);
  for (auto [dy, dx] : {std::pair{1, 0}, {0, 3}, {4, 5}, {-2, 1}}) {
    const auto a = apply_rule(translated(cfg, dy, dx), rule);
    const auto b = translated(apply_rule(cfg, rule), dy, dx);
    CHECK(a == b);
  }
}

TEST_CASE("trajectories compose and keep constants fixed") {
  camid::Rng rng(14);
  const auto rule = random_rule({Topology::manhattan, 1}, rng);

  const auto fixed = evolve(Configuration(5, 5, 0.5), rule, 10);
  REQUIRE(fixed.size() == 11);
  for (const auto& cfg : fixed)
    for (double v : cfg.cells()) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));

  const auto cfg = random_cfg(5, 5, rng);
  const auto ident = evolve(cfg, RuleParams::identity({Topology::moore, 1}), 3);
  REQUIRE(ident.size() == 4);
  for (const auto& step : ident) CHECK(step == cfg);

  const auto traj = evolve(cfg, rule, 2);
  CHECK(traj[2] == apply_rule(apply_rule(cfg, rule), rule));

  CHECK_THROWS_AS(evolve(cfg, rule, 0), std::invalid_argument);
}
