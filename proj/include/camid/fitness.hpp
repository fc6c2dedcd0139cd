// One-step-prediction objective for rule identification.
//
// The objective scores a candidate weight vector theta against observed
// trajectory data: for every time step t the next configuration is predicted
// from the *observed* configuration at t (teacher forcing), and the weighted
// L1 distance to the observed configuration at t+1 is accumulated:
//
//   J(theta) = sum_t  d(observed[t+1], step(observed[t]; theta))
//
// Because predictions always start from observed states, the neighborhood
// values are independent of theta. The evaluator therefore flattens them
// once into a k-major table (rows = (t, cell), one plane per offset) and
// every evaluation is a streamed dot-and-reduce over that table.
#pragma once

#include <span>
#include <vector>

#include "camid/grid.hpp"
#include "camid/metrics.hpp"
#include "camid/neighborhood.hpp"

namespace camid {

struct ObservedDataset;

class FitnessEvaluator {
 public:
  // Builds the table from trajectory[0..T-1] with targets trajectory[1..T].
  FitnessEvaluator(const std::vector<Configuration>& trajectory,
                   const NeighborhoodSpec& spec,
                   WeightScheme weighting = WeightScheme::centered);

  // Convenience: uses dataset.observed and dataset.spec's neighborhood.
  FitnessEvaluator(const ObservedDataset& data,
                   WeightScheme weighting = WeightScheme::centered);

  int k() const { return k_; }
  long rows() const { return nrows_; }

  // J(theta); throws if theta.size() != k().
  double evaluate(std::span<const double> theta) const;

  // J for `count` weight vectors stored back to back (count * k values).
  void evaluate_batch(std::span<const double> thetas, int count,
                      std::span<double> out) const;

  // J(theta) and its subgradient (sign(0) treated as 0).
  double evaluate_with_subgradient(std::span<const double> theta,
                                   std::span<double> grad) const;

 private:
  int k_ = 0;
  long nrows_ = 0;
  std::vector<double> neighbors_;  // k-major: [j * nrows + row]
  std::vector<double> targets_;
  std::vector<double> weights_;
};

}  // namespace camid
