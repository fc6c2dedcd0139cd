#include <set>

#include "camid/neighborhood.hpp"
#include "doctest.h"

using camid::NeighborhoodSpec;
using camid::Offset;
using camid::Topology;

TEST_CASE("ball sizes match the closed forms") {
  CHECK(NeighborhoodSpec{Topology::manhattan, 1}.size() == 5);
  CHECK(NeighborhoodSpec{Topology::manhattan, 2}.size() == 13);
  CHECK(NeighborhoodSpec{Topology::manhattan, 3}.size() == 25);
  CHECK(NeighborhoodSpec{Topology::moore, 1}.size() == 9);
  CHECK(NeighborhoodSpec{Topology::moore, 2}.size() == 25);
  CHECK(NeighborhoodSpec{Topology::moore, 3}.size() == 49);
}

TEST_CASE("manhattan radius-1 offsets in row-major order") {
  const auto offs = NeighborhoodSpec{Topology::manhattan, 1}.offsets();
  const std::vector<Offset> expected{{-1, 0}, {0, -1}, {0, 0}, {0, 1}, {1, 0}};
  CHECK(offs == expected);
}

TEST_CASE("moore radius-1 offsets cover the 3x3 block") {
  const auto offs = NeighborhoodSpec{Topology::moore, 1}.offsets();
  REQUIRE(offs.size() == 9);
  std::size_t i = 0;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) CHECK(offs[i++] == Offset{dy, dx});
}

TEST_CASE("offset lists: size formula, origin, uniqueness, symmetry, order") {
  for (Topology t : {Topology::manhattan, Topology::moore}) {
    for (int r = 1; r <= 6; ++r) {
      const NeighborhoodSpec spec{t, r};
      const auto offs = spec.offsets();
      CHECK(static_cast<int>(offs.size()) == spec.size());

      std::set<std::pair<int, int>> unique;
      for (const auto& o : offs) unique.insert({o.dy, o.dx});
      CHECK(unique.size() == offs.size());
      CHECK(unique.count({0, 0}) == 1);
      for (const auto& o : offs) CHECK(unique.count({-o.dy, -o.dx}) == 1);

      for (std::size_t j = 1; j < offs.size(); ++j) {
        const bool ordered = offs[j - 1].dy < offs[j].dy ||
                             (offs[j - 1].dy == offs[j].dy &&
                              offs[j - 1].dx < offs[j].dx);
        CHECK(ordered);
      }
    }
  }
}

TEST_CASE("radius 0 degenerates to the origin") {
  const NeighborhoodSpec spec{Topology::moore, 0};
  CHECK(spec.size() == 1);
  CHECK(spec.offsets() == std::vector<Offset>{{0, 0}});
}

TEST_CASE("negative radius is rejected") {
  CHECK_THROWS_AS((NeighborhoodSpec{Topology::manhattan, -1}.size()),
                  std::invalid_argument);
}
