// Distances between Bernoulli measures and between whole configurations.
#pragma once

#include <vector>

#include "camid/grid.hpp"

namespace camid {

// Monge-Kantorovich distance between Bernoulli measures with parameters p
// and q. The optimal-transport supremum collapses to |p - q| in this case.
inline double mk_distance(double p, double q) { return p > q ? p - q : q - p; }

// Per-cell weighting of the configuration distance.
//   centered: w(i) = 2^(-d), d = Chebyshev distance from the central cell
//             ((H-1)/2, (W-1)/2); emphasizes agreement near the center.
//   uniform:  w(i) = 1/(H*W); diagnostic alternative.
enum class WeightScheme { centered, uniform };

std::vector<double> cell_weights(int height, int width, WeightScheme scheme);

// Weighted sum of per-cell MK distances. Throws on shape mismatch.
double configuration_distance(const Configuration& a, const Configuration& b,
                              WeightScheme scheme = WeightScheme::centered);

}  // namespace camid
