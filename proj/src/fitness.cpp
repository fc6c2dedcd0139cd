#include "camid/fitness.hpp"

#include <stdexcept>

#include "camid/kernels.hpp"
#include "camid/scenario.hpp"

namespace camid {

FitnessEvaluator::FitnessEvaluator(const std::vector<Configuration>& trajectory,
                                   const NeighborhoodSpec& spec,
                                   WeightScheme weighting) {
  if (trajectory.size() < 2)
    throw std::invalid_argument("trajectory needs at least two configurations");
  const Configuration& first = trajectory.front();
  for (const auto& cfg : trajectory)
    if (!cfg.same_shape(first))
      throw std::invalid_argument("trajectory configurations differ in shape");

  const auto offsets = spec.offsets();
  k_ = static_cast<int>(offsets.size());
  const long ncells = static_cast<long>(first.size());
  const long steps = static_cast<long>(trajectory.size()) - 1;
  nrows_ = steps * ncells;

  neighbors_.resize(static_cast<std::size_t>(k_) * nrows_);
  targets_.resize(nrows_);
  weights_.resize(nrows_);

  const auto w = cell_weights(first.height(), first.width(), weighting);
  const int height = first.height();
  const int width = first.width();

  for (long t = 0; t < steps; ++t) {
    const Configuration& src = trajectory[t];
    const Configuration& dst = trajectory[t + 1];
    const long base = t * ncells;
    for (long i = 0; i < ncells; ++i) {
      targets_[base + i] = dst.cells()[i];
      weights_[base + i] = w[i];
    }
    for (int j = 0; j < k_; ++j) {
      double* plane = neighbors_.data() + static_cast<long>(j) * nrows_ + base;
      const int dy = offsets[j].dy;
      const int dx = offsets[j].dx;
      long i = 0;
      for (int r = 0; r < height; ++r) {
        const int sr = ((r + dy) % height + height) % height;
        for (int c = 0; c < width; ++c, ++i) {
          const int sc = ((c + dx) % width + width) % width;
          plane[i] = src.cells()[static_cast<std::size_t>(sr) * width + sc];
        }
      }
    }
  }
}

FitnessEvaluator::FitnessEvaluator(const ObservedDataset& data,
                                   WeightScheme weighting)
    : FitnessEvaluator(data.observed, data.truth.spec(), weighting) {}

double FitnessEvaluator::evaluate(std::span<const double> theta) const {
  double out = 0.0;
  evaluate_batch(theta, 1, {&out, 1});
  return out;
}

void FitnessEvaluator::evaluate_batch(std::span<const double> thetas, int count,
                                      std::span<double> out) const {
  if (thetas.size() != static_cast<std::size_t>(count) * k_)
    throw std::invalid_argument("theta block size does not match k * count");
  if (out.size() < static_cast<std::size_t>(count))
    throw std::invalid_argument("output span too small");
  kernels::active().weighted_l1_batch(neighbors_.data(), targets_.data(),
                                      weights_.data(), nrows_, thetas.data(),
                                      count, k_, out.data());
}

double FitnessEvaluator::evaluate_with_subgradient(
    std::span<const double> theta, std::span<double> grad) const {
  if (theta.size() != static_cast<std::size_t>(k_) ||
      grad.size() != static_cast<std::size_t>(k_))
    throw std::invalid_argument("theta/grad length does not match k");
  return kernels::active().weighted_l1_subgradient(
      neighbors_.data(), targets_.data(), weights_.data(), nrows_,
      theta.data(), k_, grad.data());
}

}  // namespace camid
