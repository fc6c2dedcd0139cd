#include <sstream>
#include <stdexcept>

#include "camid/grid.hpp"
#include "camid/rng.hpp"
#include "doctest.h"

using camid::Configuration;

TEST_CASE("construction validates dimensions and cell range") {
  CHECK_THROWS_AS(Configuration(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(Configuration(2, 2, {0.1, 0.2, 0.3}), std::invalid_argument);
  CHECK_THROWS_AS(Configuration(1, 2, {0.5, 1.5}), std::invalid_argument);
  CHECK_THROWS_AS(Configuration(1, 2, {-0.1, 0.5}), std::invalid_argument);
  const Configuration ok(2, 3, 0.25);
  CHECK(ok.size() == 6);
  CHECK(ok.at(1, 2) == 0.25);
}

TEST_CASE("toroidal accessor wraps both axes") {
  Configuration cfg(2, 3, 0.0);
  cfg.set(0, 0, 1.0);
  CHECK(cfg.at_wrapped(2, 3) == 1.0);
  CHECK(cfg.at_wrapped(-2, -3) == 1.0);
  CHECK(cfg.at_wrapped(-1, 0) == cfg.at(1, 0));
  CHECK(cfg.at_wrapped(7, -5) == cfg.at(1, 1));
}

TEST_CASE("CSV and JSON round trips are bit-exact") {
  camid::Rng rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    const int h = 1 + static_cast<int>(camid::draw::index(rng, 6));
    const int w = 1 + static_cast<int>(camid::draw::index(rng, 6));
    std::vector<double> cells(static_cast<std::size_t>(h) * w);
    for (double& c : cells) c = camid::draw::u01(rng);
    const Configuration cfg(h, w, cells);

    CHECK(Configuration::from_csv_string(cfg.to_csv()) == cfg);
    CHECK(Configuration::from_json(cfg.to_json()) == cfg);
  }
}

TEST_CASE("CSV parsing rejects ragged grids") {
  std::istringstream bad("0.1,0.2\n0.3\n");
  CHECK_THROWS_AS(Configuration::from_csv(bad), std::invalid_argument);
}

TEST_CASE("random configurations are seed-deterministic") {
  const auto a = camid::random_configuration(5, 7, 1234);
  const auto b = camid::random_configuration(5, 7, 1234);
  const auto c = camid::random_configuration(5, 7, 1235);
  CHECK(a == b);
  CHECK(a != c);
  for (double p : a.cells()) CHECK(camid::is_bernoulli_param(p));
}
