#include "camid/rule.hpp"

#include <cmath>
#include <stdexcept>

#include "camid/kernels.hpp"

namespace camid {

RuleParams::RuleParams(NeighborhoodSpec spec, std::vector<double> weights)
    : spec_(spec), weights_(std::move(weights)) {
  spec_.validate();
  if (static_cast<int>(weights_.size()) != spec_.size())
    throw std::invalid_argument("rule weight count does not match neighborhood size");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0 && w <= 1.0))
      throw std::invalid_argument("rule weight outside [0,1]");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > kSimplexTolerance)
    throw std::invalid_argument("rule weights do not sum to 1");
}

RuleParams RuleParams::identity(NeighborhoodSpec spec) {
  std::vector<double> w(spec.size(), 0.0);
  const auto offsets = spec.offsets();
  for (std::size_t j = 0; j < offsets.size(); ++j)
    if (offsets[j] == Offset{0, 0}) w[j] = 1.0;
  return RuleParams(spec, std::move(w));
}

RuleParams RuleParams::uniform(NeighborhoodSpec spec) {
  const int k = spec.size();
  return RuleParams(spec, std::vector<double>(k, 1.0 / k));
}

std::vector<double> gather_neighborhood(const Configuration& cfg, int row,
                                        int col, const NeighborhoodSpec& spec) {
  if (row < 0 || row >= cfg.height() || col < 0 || col >= cfg.width())
    throw std::invalid_argument("cell out of bounds");
  const auto offsets = spec.offsets();
  std::vector<double> out;
  out.reserve(offsets.size());
  for (const Offset& o : offsets)
    out.push_back(cfg.at_wrapped(row + o.dy, col + o.dx));
  return out;
}

Configuration apply_rule(const Configuration& cfg, const RuleParams& rule) {
  const auto offsets = rule.spec().offsets();
  const int k = rule.size();
  std::vector<int> dy(k), dx(k);
  for (int j = 0; j < k; ++j) {
    dy[j] = offsets[j].dy;
    dx[j] = offsets[j].dx;
  }
  std::vector<double> out(cfg.size());
  kernels::active().apply_rule(cfg.data(), out.data(), cfg.height(),
                               cfg.width(), dy.data(), dx.data(),
                               rule.weights().data(), k);
  return Configuration(cfg.height(), cfg.width(), std::move(out));
}

std::vector<Configuration> evolve(const Configuration& initial,
                                  const RuleParams& rule, int steps) {
  if (steps < 1) throw std::invalid_argument("evolve needs steps >= 1");
  std::vector<Configuration> traj;
  traj.reserve(steps + 1);
  traj.push_back(initial);
  for (int t = 0; t < steps; ++t) traj.push_back(apply_rule(traj.back(), rule));
  return traj;
}

}  // namespace camid
