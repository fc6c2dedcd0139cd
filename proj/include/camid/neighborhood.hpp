// Neighborhood geometry: Manhattan (von Neumann) and Moore balls on Z^2.
#pragma once

#include <string>
#include <vector>

namespace camid {

enum class Topology { manhattan, moore };

const char* to_string(Topology t);
Topology topology_from_string(const std::string& name);

struct Offset {
  int dy = 0;
  int dx = 0;
  bool operator==(const Offset&) const = default;
};

// Closed ball of the given radius around the origin. Radius 0 degenerates to
// the single-cell {(0,0)} neighborhood, which keeps one-parameter
// identification problems expressible; the experiment generators require
// radius >= 1.
struct NeighborhoodSpec {
  Topology topology = Topology::manhattan;
  int radius = 1;

  bool operator==(const NeighborhoodSpec&) const = default;

  // Closed-form ball size: 2r^2+2r+1 (Manhattan) or (2r+1)^2 (Moore).
  int size() const;

  // All offsets with d1 <= r (Manhattan) or d_inf <= r (Moore), sorted
  // row-major: dy ascending, then dx ascending. Contains (0,0) and is
  // symmetric under negation.
  std::vector<Offset> offsets() const;

  void validate() const;  // throws std::invalid_argument on radius < 0
};

}  // namespace camid
