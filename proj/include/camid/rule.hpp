// Convex-combination local rule: weights on the probability simplex, one per
// neighborhood offset, plus the synchronous lattice update built on it.
#pragma once

#include <span>
#include <vector>

#include "camid/grid.hpp"
#include "camid/neighborhood.hpp"

namespace camid {

// Tolerance on |sum(weights) - 1| accepted at construction. Repair and the
// generators renormalize exactly, so anything beyond this is a logic error.
inline constexpr double kSimplexTolerance = 1e-9;

class RuleParams {
 public:
  RuleParams() = default;

  // Validates: weights.size() == spec.size(), each weight in [0,1], and the
  // weight sum equal to 1 within kSimplexTolerance. Throws otherwise.
  RuleParams(NeighborhoodSpec spec, std::vector<double> weights);

  const NeighborhoodSpec& spec() const { return spec_; }
  const std::vector<double>& weights() const { return weights_; }
  int size() const { return static_cast<int>(weights_.size()); }

  bool operator==(const RuleParams&) const = default;

  // Weight 1 on offset (0,0): the identity update.
  static RuleParams identity(NeighborhoodSpec spec);
  static RuleParams uniform(NeighborhoodSpec spec);

 private:
  NeighborhoodSpec spec_;
  std::vector<double> weights_;
};

// States of the neighborhood of (row, col), in offsets() order, with
// toroidal wrapping at the lattice edges.
std::vector<double> gather_neighborhood(const Configuration& cfg, int row,
                                        int col, const NeighborhoodSpec& spec);

// One synchronous step: out_i = sum_k w_k * neighbor_k(i), every cell updated
// from the input configuration only. Results are clamped into [0,1] to absorb
// last-ulp rounding of the convex sum. Independent of traversal order and of
// the selected SIMD kernel (bit-exact across kernels).
Configuration apply_rule(const Configuration& cfg, const RuleParams& rule);

// Trajectory [x(0), ..., x(steps)]; steps >= 1.
std::vector<Configuration> evolve(const Configuration& initial,
                                  const RuleParams& rule, int steps);

}  // namespace camid
