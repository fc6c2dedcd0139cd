#include "camid/neighborhood.hpp"

#include <cstdlib>
#include <stdexcept>

namespace camid {

const char* to_string(Topology t) {
  return t == Topology::manhattan ? "manhattan" : "moore";
}

Topology topology_from_string(const std::string& name) {
  if (name == "manhattan" || name == "von-neumann") return Topology::manhattan;
  if (name == "moore") return Topology::moore;
  throw std::invalid_argument("unknown topology: " + name);
}

void NeighborhoodSpec::validate() const {
  if (radius < 0) throw std::invalid_argument("neighborhood radius must be >= 0");
}

int NeighborhoodSpec::size() const {
  validate();
  const int r = radius;
  return topology == Topology::manhattan ? 2 * r * r + 2 * r + 1
                                         : (2 * r + 1) * (2 * r + 1);
}

std::vector<Offset> NeighborhoodSpec::offsets() const {
  validate();
  std::vector<Offset> out;
  out.reserve(size());
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const bool inside = topology == Topology::manhattan
                              ? std::abs(dy) + std::abs(dx) <= radius
                              : true;  // the dy/dx loop bounds are the Moore ball
      if (inside) out.push_back({dy, dx});
    }
  }
  return out;
}

}  // namespace camid
