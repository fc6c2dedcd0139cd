// Scalar reference kernels. Everything here is the semantic ground truth the
// SIMD variants are tested against, so the loops stay as plain as possible.
// Builds rely on -ffp-contract=off: the per-cell multiply-add sequences must
// not be fused, or the bit-exactness contract with the SIMD kernels breaks.
#include <cmath>

#include "camid/kernels.hpp"

namespace camid::kernels {

namespace {

inline int wrap(int v, int n) { return ((v % n) + n) % n; }

void apply_rule_scalar(const double* src, double* dst, int height, int width,
                       const int* off_dy, const int* off_dx,
                       const double* theta, int k) {
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int j = 0; j < k; ++j) {
        const int rr = wrap(r + off_dy[j], height);
        const int cc = wrap(c + off_dx[j], width);
        acc += theta[j] * src[static_cast<long>(rr) * width + cc];
      }
      if (acc < 0.0) acc = 0.0;
      if (acc > 1.0) acc = 1.0;
      dst[static_cast<long>(r) * width + c] = acc;
    }
  }
}

void weighted_l1_batch_scalar(const double* neighbors, const double* targets,
                              const double* weights, long nrows,
                              const double* thetas, int count, int k,
                              double* out) {
  for (int c = 0; c < count; ++c) {
    const double* theta = thetas + static_cast<long>(c) * k;
    double total = 0.0;
    for (long r = 0; r < nrows; ++r) {
      double pred = 0.0;
      for (int j = 0; j < k; ++j)
        pred += theta[j] * neighbors[static_cast<long>(j) * nrows + r];
      total += weights[r] * std::fabs(targets[r] - pred);
    }
    out[c] = total;
  }
}

double weighted_l1_subgradient_scalar(const double* neighbors,
                                      const double* targets,
                                      const double* weights, long nrows,
                                      const double* theta, int k,
                                      double* grad) {
  for (int j = 0; j < k; ++j) grad[j] = 0.0;
  double total = 0.0;
  for (long r = 0; r < nrows; ++r) {
    double pred = 0.0;
    for (int j = 0; j < k; ++j)
      pred += theta[j] * neighbors[static_cast<long>(j) * nrows + r];
    const double res = pred - targets[r];
    total += weights[r] * std::fabs(res);
    if (res != 0.0) {
      const double ws = res > 0.0 ? weights[r] : -weights[r];
      for (int j = 0; j < k; ++j)
        grad[j] += ws * neighbors[static_cast<long>(j) * nrows + r];
    }
  }
  return total;
}

constexpr KernelOps kScalarOps = {
    "scalar",
    apply_rule_scalar,
    weighted_l1_batch_scalar,
    weighted_l1_subgradient_scalar,
};

}  // namespace

const KernelOps* scalar_kernels() { return &kScalarOps; }

}  // namespace camid::kernels
