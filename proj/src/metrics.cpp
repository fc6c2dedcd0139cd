#include "camid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace camid {

std::vector<double> cell_weights(int height, int width, WeightScheme scheme) {
  std::vector<double> w(static_cast<std::size_t>(height) * width);
  if (scheme == WeightScheme::uniform) {
    std::fill(w.begin(), w.end(), 1.0 / (static_cast<double>(height) * width));
    return w;
  }
  const int cr = (height - 1) / 2;
  const int cc = (width - 1) / 2;
  std::size_t i = 0;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c, ++i) {
      const int d = std::max(std::abs(r - cr), std::abs(c - cc));
      w[i] = std::ldexp(1.0, -d);  // exact powers of two
    }
  }
  return w;
}

double configuration_distance(const Configuration& a, const Configuration& b,
                              WeightScheme scheme) {
  if (!a.same_shape(b))
    throw std::invalid_argument("configuration shapes differ");
  const auto w = cell_weights(a.height(), a.width(), scheme);
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    sum += w[i] * mk_distance(a.cells()[i], b.cells()[i]);
  return sum;
}

}  // namespace camid
